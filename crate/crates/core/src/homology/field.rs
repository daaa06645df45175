use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FieldSpec {
    p: u32,
}

impl FieldSpec {
    pub const GF2: FieldSpec = FieldSpec { p: 2 };

    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("field characteristic {p} is not prime")));
        }
        // products of two residues must fit in u64 comfortably
        if p >= 1 << 31 {
            return Err(Error::invalid(format!("field characteristic {p} too large")));
        }
        Ok(FieldSpec { p })
    }

    pub fn characteristic(self) -> u32 {
        self.p
    }

    pub fn is_binary(self) -> bool {
        self.p == 2
    }

    pub(crate) fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }

    pub(crate) fn neg(self, a: u32) -> u32 {
        if a == 0 { 0 } else { self.p - a }
    }

    pub(crate) fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub(crate) fn inv(self, a: u32) -> u32 {
        debug_assert!(a % self.p != 0, "inverse of zero");
        // Fermat: a^(p-2)
        let (mut base, mut exp, mut acc) = (a as u64 % self.p as u64, self.p as u64 - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p as u64;
            }
            base = base * base % self.p as u64;
            exp >>= 1;
        }
        acc as u32
    }

    /// Residue of the sign `(-1)^i`.
    pub(crate) fn sign(self, i: usize) -> u32 {
        if i % 2 == 0 { 1 } else { self.p - 1 }
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::GF2
    }
}

impl TryFrom<u32> for FieldSpec {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        FieldSpec::new(p)
    }
}

impl From<FieldSpec> for u32 {
    fn from(f: FieldSpec) -> u32 {
        f.p
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u32;
    while (q as u64) * (q as u64) <= p as u64 {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_only() {
        for p in [2, 3, 5, 7, 101, 65_521] {
            assert!(FieldSpec::new(p).is_ok());
        }
        for p in [0, 1, 4, 9, 15, 65_535] {
            assert!(FieldSpec::new(p).is_err());
        }
    }

    #[test]
    fn inverses() {
        for p in [2u32, 3, 5, 7, 13] {
            let f = FieldSpec::new(p).unwrap();
            for a in 1..p {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }
}
