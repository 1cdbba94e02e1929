//! Raw binary matrix dump: row-major `(re, im)` pairs of little-endian `f64`,
//! no header.

use super::{FockOperator, SystemShape};
use crate::linalg::{CMatrix, C64};
use crate::{Error, Result};
use std::io::{Read, Write};

impl FockOperator {
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        let d = self.dim();
        let mut buf = Vec::with_capacity(d * d * 16);
        for r in 0..d {
            for c in 0..d {
                let z = self.matrix[(r, c)];
                buf.extend_from_slice(&z.re.to_le_bytes());
                buf.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_dump<R: Read>(shape: SystemShape, mut r: R) -> Result<Self> {
        let d = shape.dim();
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() != d * d * 16 {
            return Err(Error::ShapeMismatch(format!(
                "dump holds {} bytes, shape needs {}",
                bytes.len(),
                d * d * 16
            )));
        }
        let word = |k: usize| f64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().unwrap());
        let m = CMatrix::from_fn(d, d, |row, col| {
            let k = 2 * (row * d + col);
            C64::new(word(k), word(k + 1))
        });
        FockOperator::new(shape, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::majorana;

    #[test]
    fn dump_layout_and_round_trip() {
        let s = SystemShape::new(1, 1).unwrap();
        let m = majorana(s, 0, 1).unwrap();
        let mut buf = Vec::new();
        m.write_dump(&mut buf).unwrap();
        assert_eq!(buf.len(), 64);
        // entry (0, 1) = -i: second complex pair, imaginary word
        let im01 = f64::from_le_bytes(buf[24..32].try_into().unwrap());
        assert_eq!(im01, -1.0);
        let back = FockOperator::read_dump(s, &buf[..]).unwrap();
        assert_eq!(back, m);
        assert!(FockOperator::read_dump(s, &buf[..8]).is_err());
    }
}
