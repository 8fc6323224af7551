//! On-disk format for [`SubdivisionBasis`].
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic    b"BSUB"
//! version  u32 (= 1)
//! n        u32
//! d_i      u32 x n
//! for each axis: L^(d_i) then R^(d_i), row-major, (d_i + 1)^2 entries, each
//!   numerator:   sign u8 (0 = non-negative, 1 = negative), len u32, magnitude bytes
//!   denominator: len u32, magnitude bytes (positive)
//! ```

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::index::MultiDegree;
use crate::matrix::RatMatrix;
use crate::rational::Rational;
use crate::subdivision::{Side, SubdivisionBasis};

pub const MAGIC: &[u8; 4] = b"BSUB";
pub const VERSION: u32 = 1;

pub fn write_basis<W: Write>(basis: &SubdivisionBasis, mut out: W) -> Result<()> {
    let d = basis.degree();
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(d.nvars() as u32).to_le_bytes())?;
    for &di in d.as_slice() {
        out.write_all(&di.to_le_bytes())?;
    }
    for axis in 0..d.nvars() {
        for side in [Side::Left, Side::Right] {
            for v in basis.factor(axis, side).entries() {
                write_rational(&mut out, v)?;
            }
        }
    }
    Ok(())
}

pub fn read_basis<R: Read>(mut input: R) -> Result<SubdivisionBasis> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic).map_err(truncated)?;
    if &magic != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let version = read_u32(&mut input)?;
    if version != VERSION {
        return Err(Error::Cache(format!("unsupported version {version}")));
    }
    let n = read_u32(&mut input)? as usize;
    if n > 64 {
        return Err(Error::Cache(format!("implausible variable count {n}")));
    }
    let degrees = (0..n).map(|_| read_u32(&mut input)).collect::<Result<Vec<_>>>()?;
    if degrees.iter().any(|&d| d > 4096) {
        return Err(Error::Cache("implausible degree".into()));
    }
    let degree = MultiDegree::new(degrees);
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for axis in 0..n {
        let dim = degree.dim(axis);
        for side in [Side::Left, Side::Right] {
            let mut rows = Vec::with_capacity(dim);
            for _ in 0..dim {
                rows.push((0..dim).map(|_| read_rational(&mut input)).collect::<Result<Vec<_>>>()?);
            }
            let m = RatMatrix::from_rows(rows);
            match side {
                Side::Left => left.push(m),
                Side::Right => right.push(m),
            }
        }
    }
    let mut trailing = [0u8; 1];
    if input.read(&mut trailing)? != 0 {
        return Err(Error::Cache("trailing bytes".into()));
    }
    SubdivisionBasis::from_parts(degree, left, right)
}

/// Directory of serialized bases, one file per multi-degree.
#[derive(Debug, Clone)]
pub struct BasisCache {
    dir: PathBuf,
}

impl BasisCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        BasisCache { dir: dir.into() }
    }

    pub fn path_for(&self, degree: &MultiDegree) -> PathBuf {
        let key: Vec<String> = degree.as_slice().iter().map(u32::to_string).collect();
        self.dir.join(format!("basis-{}.bin", key.join("_")))
    }

    /// Loads the basis for `degree`, building and storing it on a miss.
    pub fn load_or_build(&self, degree: &MultiDegree) -> Result<SubdivisionBasis> {
        let path = self.path_for(degree);
        if path.exists() {
            let basis = read_file(&path)?;
            if basis.degree() != degree {
                return Err(Error::Cache(format!("{} holds degree {}", path.display(), basis.degree())));
            }
            return Ok(basis);
        }
        let basis = SubdivisionBasis::new(degree);
        fs::create_dir_all(&self.dir)?;
        write_file(&basis, &path)?;
        Ok(basis)
    }
}

pub fn write_file(basis: &SubdivisionBasis, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_basis(basis, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn read_file(path: &Path) -> Result<SubdivisionBasis> {
    read_basis(fs::read(path)?.as_slice())
}

fn write_rational<W: Write>(out: &mut W, v: &Rational) -> Result<()> {
    let (sign, mag) = v.numer().to_bytes_le();
    out.write_all(&[u8::from(sign == Sign::Minus)])?;
    write_bytes(out, &mag)?;
    let (_, den) = v.denom().to_bytes_le();
    write_bytes(out, &den)
}

fn write_bytes<W: Write>(out: &mut W, bytes: &[u8]) -> Result<()> {
    out.write_all(&(bytes.len() as u32).to_le_bytes())?;
    out.write_all(bytes)?;
    Ok(())
}

fn read_rational<R: Read>(input: &mut R) -> Result<Rational> {
    let mut sign = [0u8; 1];
    input.read_exact(&mut sign).map_err(truncated)?;
    let negative = match sign[0] {
        0 => false,
        1 => true,
        s => return Err(Error::Cache(format!("bad sign byte {s}"))),
    };
    let mag = BigUint::from_bytes_le(&read_bytes(input)?);
    let den = BigUint::from_bytes_le(&read_bytes(input)?);
    if den.is_zero() {
        return Err(Error::Cache("zero denominator".into()));
    }
    let num = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, mag);
    Ok(Rational::new(num, BigInt::from(den)))
}

fn read_bytes<R: Read>(input: &mut R) -> Result<Vec<u8>> {
    let len = read_u32(input)? as usize;
    if len > 1 << 20 {
        return Err(Error::Cache(format!("implausible integer length {len}")));
    }
    let mut buf = vec![0u8; len];
    input.read_exact(&mut buf).map_err(truncated)?;
    Ok(buf)
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b).map_err(truncated)?;
    Ok(u32::from_le_bytes(b))
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Cache("truncated input".into())
    } else {
        e.into()
    }
}
