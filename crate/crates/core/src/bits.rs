//! Basis-index helpers.
//!
//! Qubit 0 is the leftmost symbol of a ket and the most significant bit of
//! the basis index, so `|011⟩` on three qubits is index 3.

use crate::error::{Error, Result};

/// Mask selecting qubit `q` in an `n`-qubit basis index.
#[inline]
pub fn qubit_mask(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

/// Value (0 or 1) of qubit `q` in basis index `index`.
#[inline]
pub fn qubit_value(n: usize, index: usize, q: usize) -> usize {
    (index >> (n - 1 - q)) & 1
}

#[inline]
pub fn parity(index: usize) -> usize {
    (index.count_ones() & 1) as usize
}

pub fn to_bit_string(n: usize, index: usize) -> String {
    (0..n)
        .map(|q| if qubit_value(n, index, q) == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_bit_string(s: &str) -> Result<usize> {
    if s.is_empty() || s.len() > usize::BITS as usize - 1 {
        return Err(Error::InvalidBitString(s.to_owned()));
    }
    s.chars().try_fold(0usize, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        _ => Err(Error::InvalidBitString(s.to_owned())),
    })
}

/// Parse a bit string that must have exactly `n` symbols.
pub fn parse_bits_exact(s: &str, n: usize) -> Result<usize> {
    let v = parse_bit_string(s)?;
    if s.len() != n {
        return Err(Error::MessageLength { expected: n, found: s.len() });
    }
    Ok(v)
}

/// `2^(n/2)` evaluated so that the odd case is `2^((n-1)/2) * sqrt(2)`.
///
/// Both the state constructors and the MPS contraction go through this, which
/// keeps their amplitudes bitwise identical.
pub fn pow2_half(n: usize) -> f64 {
    let whole = (1u64 << (n / 2)) as f64;
    if n % 2 == 0 {
        whole
    } else {
        whole * std::f64::consts::SQRT_2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn msb_is_qubit_zero() {
        assert_eq!(to_bit_string(3, 0b011), "011");
        assert_eq!(qubit_value(3, 0b100, 0), 1);
        assert_eq!(qubit_mask(4, 3), 1);
        assert_eq!(parse_bit_string("0110").unwrap(), 6);
    }

    #[test]
    fn rejects_bad_bits() {
        assert!(parse_bit_string("01a").is_err());
        assert!(parse_bit_string("").is_err());
        assert_eq!(
            parse_bits_exact("01", 3),
            Err(Error::MessageLength { expected: 3, found: 2 })
        );
    }

    #[test]
    fn pow2_half_matches_powf() {
        for n in 0..20 {
            let exact = 2f64.powf(n as f64 / 2.0);
            assert!((pow2_half(n) - exact).abs() / exact < 1e-15);
        }
    }
}
