use crate::algebra::PrimeDim;
use crate::channel::TaskSpaces;
use crate::error::{Error, Result};

/// Largest string length accepted.
pub const MAX_N: u32 = 16;

/// Binary `N -> 1` random access code: Alice holds `x in {0,1}^N`, Bob holds `y` and outputs `x_y`.
///
/// Strings are indexed as integers with `x_1` the most significant bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RacTask {
    n: u32,
}

impl RacTask {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::out_of_range("N", n as u64, 1, MAX_N as u64));
        }
        Ok(RacTask { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn strings(&self) -> usize {
        1 << self.n
    }

    /// Bit `x_{y+1}` for zero-based `y`.
    #[inline]
    pub fn bit(&self, x: usize, y: usize) -> u32 {
        ((x >> (self.n as usize - 1 - y)) & 1) as u32
    }

    pub fn label(&self, x: usize) -> String {
        (0..self.n as usize)
            .map(|y| if self.bit(x, y) == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn parse(&self, label: &str) -> Result<usize> {
        if label.len() != self.n as usize || !label.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::InvalidInput(format!(
                "{label:?} is not a {}-bit string",
                self.n
            )));
        }
        Ok(usize::from_str_radix(label, 2).expect("binary digits"))
    }

    /// `X = {0,1}^N` as bit strings, `Y = {1..N}`, `B = {0,1}`, `d = 2`.
    pub fn spaces(&self) -> TaskSpaces {
        let d = PrimeDim::new(2).expect("2 is prime");
        TaskSpaces::new(
            d,
            (0..self.strings()).map(|x| self.label(x)).collect(),
            (1..=self.n).map(|y| y.to_string()).collect(),
            vec!["0".into(), "1".into()],
        )
        .expect("RAC alphabets are valid")
    }

    /// Number of ones among the first `m` bits.
    pub fn ones_in_prefix(&self, x: usize, m: usize) -> u32 {
        (0..m).map(|y| self.bit(x, y)).sum()
    }
}
