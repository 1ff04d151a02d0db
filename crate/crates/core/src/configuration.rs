//! Solvent configurations: one two-state coordinate per molecule.

use std::fmt;

use crate::error::{Error, Result};

/// Largest ensemble whose configuration space is enumerated explicitly.
pub const MAX_MOLECULES: usize = 20;

/// A bitstring (l_1 … l_N). Bit `i` (0-based) is `(index >> i) & 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolventConfig {
    index: usize,
    n: usize,
}

impl SolventConfig {
    pub fn from_index(index: usize, n: usize) -> Result<Self> {
        check_size(n)?;
        if index >= 1 << n {
            return Err(Error::ConfigOutOfRange {
                index,
                n,
                bound: 1 << n,
            });
        }
        Ok(SolventConfig { index, n })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        check_size(bits.len())?;
        let mut index = 0;
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => index |= 1 << i,
                _ => return Err(Error::param("bits", format!("bit {i} is {b}, expected 0 or 1"))),
            }
        }
        Ok(SolventConfig {
            index,
            n: bits.len(),
        })
    }

    /// All molecules with the solvent in state 0.
    pub fn ground(n: usize) -> Result<Self> {
        Self::from_index(0, n)
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bit(&self, i: usize) -> u8 {
        ((self.index >> i) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.n).map(|i| self.bit(i)).collect()
    }

    /// Same configuration with the coordinate of molecule `i` flipped.
    pub fn flipped(&self, i: usize) -> Self {
        SolventConfig {
            index: self.index ^ (1 << i),
            n: self.n,
        }
    }

    pub fn excited_count(&self) -> u32 {
        self.index.count_ones()
    }
}

impl fmt::Display for SolventConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("n", "at least one molecule is required"));
    }
    if n > MAX_MOLECULES {
        return Err(Error::TooManyMolecules {
            n,
            max: MAX_MOLECULES,
            blocks: 1 << MAX_MOLECULES,
        });
    }
    Ok(())
}

/// All 2^N configurations in ascending index order.
pub fn enumerate_configs(n: usize) -> Result<Vec<SolventConfig>> {
    check_size(n)?;
    Ok((0..1usize << n).map(|index| SolventConfig { index, n }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_molecule() {
        let c = enumerate_configs(1).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].bits(), vec![0]);
        assert_eq!(c[1].bits(), vec![1]);
    }

    #[test]
    fn binary_encoding() {
        let c = enumerate_configs(3).unwrap();
        assert_eq!(c.len(), 8);
        assert_eq!(SolventConfig::from_bits(&[1, 0, 0]).unwrap().index(), 1);
        assert_eq!(SolventConfig::from_bits(&[0, 0, 1]).unwrap().index(), 4);
        assert!(c.windows(2).all(|w| w[0].index() < w[1].index()));
        assert_eq!(c[6].to_string(), "011");
    }

    #[test]
    fn size_guard() {
        let err = enumerate_configs(21).unwrap_err();
        assert!(matches!(err, Error::TooManyMolecules { n: 21, .. }));
        assert!(err.to_string().contains("2^20"));
        assert!(enumerate_configs(0).is_err());
        assert!(SolventConfig::from_index(8, 3).is_err());
        assert!(SolventConfig::from_bits(&[0, 2]).is_err());
    }

    proptest! {
        #[test]
        fn bits_index_bijection(n in 1usize..=12, raw in any::<usize>()) {
            let index = raw % (1 << n);
            let c = SolventConfig::from_index(index, n).unwrap();
            let back = SolventConfig::from_bits(&c.bits()).unwrap();
            prop_assert_eq!(back, c);
            let weighted: usize = c.bits().iter().enumerate().map(|(i, &b)| (b as usize) << i).sum();
            prop_assert_eq!(weighted, index);
            prop_assert_eq!(c.flipped(0).flipped(0), c);
        }
    }
}
