//! The finite gate-schema library. Each schema is defined uniformly across arities.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Gate {
    #[serde(rename = "CONST0")]
    Const0,
    #[serde(rename = "CONST1")]
    Const1,
    Copy,
    Neg,
    And,
    Or,
    Parity,
    XorNoise,
    BernSource,
}

impl Gate {
    pub const ALL: [Gate; 9] = [
        Gate::Const0,
        Gate::Const1,
        Gate::Copy,
        Gate::Neg,
        Gate::And,
        Gate::Or,
        Gate::Parity,
        Gate::XorNoise,
        Gate::BernSource,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Gate::Const0 => "CONST0",
            Gate::Const1 => "CONST1",
            Gate::Copy => "COPY",
            Gate::Neg => "NEG",
            Gate::And => "AND",
            Gate::Or => "OR",
            Gate::Parity => "PARITY",
            Gate::XorNoise => "XOR_NOISE",
            Gate::BernSource => "BERN_SOURCE",
        }
    }

    pub fn accepts_arity(self, k: usize) -> bool {
        match self {
            Gate::Copy | Gate::Neg => k == 1,
            Gate::BernSource => k == 0,
            _ => true,
        }
    }

    /// Whether the output depends on the noise symbol. Such gates only accept
    /// binary noise symbols.
    pub fn reads_noise(self) -> bool {
        matches!(self, Gate::XorNoise | Gate::BernSource)
    }

    /// Evaluates the gate on parent bits and one noise symbol. Noise symbols
    /// other than 0/1 are rejected for noise-reading gates at SCM validation,
    /// here only the low bit is used.
    pub fn eval(self, inputs: &[bool], noise: u32) -> Result<bool> {
        if !self.accepts_arity(inputs.len()) {
            return Err(Error::ArityMismatch { gate: self.name(), arity: inputs.len() });
        }
        Ok(self.eval_unchecked(inputs, noise))
    }

    #[inline]
    pub(crate) fn eval_unchecked(self, inputs: &[bool], noise: u32) -> bool {
        let noise_bit = noise & 1 == 1;
        match self {
            Gate::Const0 => false,
            Gate::Const1 => true,
            Gate::Copy => inputs[0],
            Gate::Neg => !inputs[0],
            Gate::And => inputs.iter().all(|&b| b),
            Gate::Or => inputs.iter().any(|&b| b),
            Gate::Parity => inputs.iter().fold(false, |a, &b| a ^ b),
            Gate::XorNoise => inputs.iter().fold(noise_bit, |a, &b| a ^ b),
            Gate::BernSource => noise_bit,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Gate::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown gate {s:?}")))
    }
}
