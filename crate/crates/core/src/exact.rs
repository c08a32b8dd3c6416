//! Exact rationals, bit-vector outcomes and sparse exact distributions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Lowest-terms arbitrary precision fraction. `BigRational` normalizes on
/// construction, so the gcd invariant always holds.
pub type ExactRational = BigRational;

pub fn ratio(num: i64, den: i64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn half() -> ExactRational {
    ratio(1, 2)
}

/// Formats as `num/den`, always with an explicit denominator.
pub fn fmt_ratio(q: &ExactRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_ratio(s: &str) -> Result<ExactRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n).map_err(|_| bad())?;
            let d = BigInt::from_str(d).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

pub fn to_f64(q: &ExactRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// An outcome of `len` binary variables; position 0 is `X_1` and prints leftmost.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitVector(Vec<bool>);

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector(vec![false; len])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitVector(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, v: bool) {
        self.0[i] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn concat(parts: &[&BitVector]) -> Self {
        BitVector(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    pub fn select(&self, positions: &[usize]) -> Self {
        BitVector(positions.iter().map(|&p| self.0[p]).collect())
    }

    /// Bit-vector of length `len` for the integer `value`, most significant bit first.
    pub fn from_index(value: u64, len: usize) -> Self {
        BitVector((0..len).map(|k| (value >> (len - 1 - k)) & 1 == 1).collect())
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("bad bit {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitVector)
    }
}

/// Exact probability distribution over `{0,1}^n_bits`. Only outcomes with
/// positive mass are stored and the masses sum to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactDist {
    n_bits: usize,
    mass: BTreeMap<BitVector, ExactRational>,
}

impl ExactDist {
    /// Builds a distribution from weighted outcomes, merging duplicates and
    /// dropping zero weights. Fails unless the weights are non-negative and sum to 1.
    pub fn new(
        n_bits: usize,
        weighted: impl IntoIterator<Item = (BitVector, ExactRational)>,
    ) -> Result<Self> {
        let mut acc = Accumulator::new(n_bits);
        for (x, w) in weighted {
            if x.len() != n_bits {
                return Err(Error::LengthMismatch { left: x.len(), right: n_bits });
            }
            if w.is_negative() {
                return Err(Error::Parse(format!("negative mass {} at {x}", fmt_ratio(&w))));
            }
            acc.add(x, w);
        }
        acc.finish()
    }

    pub fn point(x: BitVector) -> Self {
        let n_bits = x.len();
        ExactDist { n_bits, mass: BTreeMap::from([(x, ExactRational::one())]) }
    }

    pub fn uniform(n_bits: usize) -> Self {
        assert!(n_bits < 64);
        let w = BigRational::new(BigInt::one(), BigInt::one() << n_bits);
        let mass = (0..1u64 << n_bits).map(|v| (BitVector::from_index(v, n_bits), w.clone())).collect();
        ExactDist { n_bits, mass }
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn support_len(&self) -> usize {
        self.mass.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitVector, &ExactRational)> {
        self.mass.iter()
    }

    pub fn prob(&self, x: &BitVector) -> ExactRational {
        self.mass.get(x).cloned().unwrap_or_else(ExactRational::zero)
    }

    /// Probability of an arbitrary event over outcomes.
    pub fn prob_where(&self, mut event: impl FnMut(&BitVector) -> bool) -> ExactRational {
        self.mass.iter().filter(|(x, _)| event(x)).fold(ExactRational::zero(), |s, (_, w)| s + w)
    }

    /// `P(X_position = value)`.
    pub fn marginal_prob(&self, position: usize, value: bool) -> ExactRational {
        self.prob_where(|x| x.get(position) == value)
    }

    /// Exact marginal onto `positions`, in the given order.
    pub fn marginal(&self, positions: &[usize]) -> Result<ExactDist> {
        if let Some(&p) = positions.iter().find(|&&p| p >= self.n_bits) {
            return Err(Error::BadPosition { position: p, n_bits: self.n_bits });
        }
        let mut acc = Accumulator::new(positions.len());
        for (x, w) in &self.mass {
            acc.add(x.select(positions), w.clone());
        }
        acc.finish()
    }

    pub fn total(&self) -> ExactRational {
        self.mass.values().fold(ExactRational::zero(), |s, w| s + w)
    }
}

/// Merges weighted outcomes into an [`ExactDist`].
#[derive(Debug)]
pub(crate) struct Accumulator {
    n_bits: usize,
    mass: BTreeMap<BitVector, ExactRational>,
}

impl Accumulator {
    pub(crate) fn new(n_bits: usize) -> Self {
        Accumulator { n_bits, mass: BTreeMap::new() }
    }

    pub(crate) fn add(&mut self, x: BitVector, w: ExactRational) {
        debug_assert_eq!(x.len(), self.n_bits);
        if w.is_zero() {
            return;
        }
        *self.mass.entry(x).or_insert_with(ExactRational::zero) += w;
    }

    pub(crate) fn finish(self) -> Result<ExactDist> {
        let mut mass = self.mass;
        mass.retain(|_, w| !w.is_zero());
        let total = mass.values().fold(ExactRational::zero(), |s, w| s + w);
        if !total.is_one() {
            return Err(Error::Parse(format!("masses sum to {}, not 1", fmt_ratio(&total))));
        }
        Ok(ExactDist { n_bits: self.n_bits, mass })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_round_trip() {
        for s in ["1/2", "0/1", "1/1", "-3/7", "12345678901234567891/2"] {
            assert_eq!(fmt_ratio(&parse_ratio(s).unwrap()), s);
        }
        assert_eq!(fmt_ratio(&parse_ratio("2/4").unwrap()), "1/2");
        assert_eq!(fmt_ratio(&parse_ratio("1").unwrap()), "1/1");
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("a/2").is_err());
    }

    #[test]
    fn bit_vector_text() {
        let b: BitVector = "0110".parse().unwrap();
        assert_eq!(b.to_string(), "0110");
        assert_eq!(BitVector::from_index(6, 4), b);
        assert!("01x".parse::<BitVector>().is_err());
    }

    #[test]
    fn dist_rejects_bad_total() {
        let r = ExactDist::new(1, [(BitVector::zeros(1), half())]);
        assert!(r.is_err());
    }

    #[test]
    fn dist_merges_and_drops_zero() {
        let z = BitVector::zeros(1);
        let o: BitVector = "1".parse().unwrap();
        let d = ExactDist::new(
            1,
            [(z.clone(), ratio(1, 4)), (z.clone(), ratio(1, 4)), (o.clone(), half()), ("0".parse().unwrap(), ratio(0, 1))],
        )
        .unwrap();
        assert_eq!(d.support_len(), 2);
        assert_eq!(d.prob(&z), half());
    }

    #[test]
    fn marginal_of_uniform() {
        let u = ExactDist::uniform(2);
        assert_eq!(u.marginal(&[0]).unwrap(), ExactDist::uniform(1));
        assert_eq!(u.marginal(&[0, 1]).unwrap(), u);
        assert!(matches!(u.marginal(&[2]), Err(Error::BadPosition { .. })));
    }
}
