//! Arithmetic over GF(2^m) for m ∈ {1, 2, 3, 4, 8}.
//!
//! Every field is table driven: `exp` holds the powers of the primitive
//! element α and `log` its discrete logarithms. They seed a full q × q
//! product table and an inverse table (64 KiB at most), so multiplication
//! and inversion are a single lookup.
//!
//! Field contexts are immutable and built once per degree; [`build_field`]
//! hands out a `&'static FieldCtx` that can be shared freely across threads.

use std::fmt;
use std::ops::{Add, AddAssign, Sub, SubAssign};
use std::sync::OnceLock;

use thiserror::Error;

/// Extension degrees with a fixed primitive polynomial.
pub const SUPPORTED_DEGREES: [u32; 5] = [1, 2, 3, 4, 8];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("unsupported extension degree m={0} (expected one of 1, 2, 3, 4, 8)")]
    UnsupportedDegree(u32),
    #[error("unsupported field order q={0} (expected 2, 4, 8, 16 or 256)")]
    UnsupportedOrder(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("value {value} is not an element of GF({order})")]
    OutOfRange { value: u32, order: u32 },
}

/// A field element in polynomial-basis bit representation.
///
/// Addition is XOR in every GF(2^m), so it does not need the field context;
/// multiplication goes through [`FieldCtx`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gf(pub u8);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    #[inline]
    pub fn value(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for Gf {
    type Output = Gf;
    #[inline]
    fn add(self, rhs: Gf) -> Gf {
        Gf(self.0 ^ rhs.0)
    }
}

impl Sub for Gf {
    type Output = Gf;
    #[inline]
    fn sub(self, rhs: Gf) -> Gf {
        Gf(self.0 ^ rhs.0)
    }
}

impl AddAssign for Gf {
    #[inline]
    fn add_assign(&mut self, rhs: Gf) {
        self.0 ^= rhs.0;
    }
}

impl SubAssign for Gf {
    #[inline]
    fn sub_assign(&mut self, rhs: Gf) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Characteristic-2 addition.
#[inline]
pub fn gf_add(a: Gf, b: Gf) -> Gf {
    a + b
}

/// Primitive polynomial (as a bit mask including the leading term) for `m`.
pub fn primitive_polynomial(m: u32) -> Result<u32, GaloisError> {
    match m {
        1 => Ok(0b11),          // x + 1
        2 => Ok(0b111),         // x^2 + x + 1
        3 => Ok(0b1011),        // x^3 + x + 1
        4 => Ok(0b1_0011),      // x^4 + x + 1
        8 => Ok(0b1_0001_1101), // x^8 + x^4 + x^3 + x^2 + 1
        other => Err(GaloisError::UnsupportedDegree(other)),
    }
}

/// GF(2^m) context: primitive polynomial plus exp/log tables.
pub struct FieldCtx {
    m: u32,
    order: u32,
    prim_poly: u32,
    // Two periods of α^i so that log a + log b never needs a reduction.
    exp: Vec<u8>,
    // log[0] is meaningless and never read.
    log: Vec<u16>,
    // Full product table, row a at offset a << m.
    mul: Vec<u8>,
    // inv[0] is meaningless and never read.
    inv: Vec<u8>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("m", &self.m)
            .field("q", &self.order)
            .field("prim_poly", &format_args!("{:#b}", self.prim_poly))
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.prim_poly == other.prim_poly
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds fresh tables for GF(2^m). Prefer [`build_field`], which caches.
    pub fn new(m: u32) -> Result<Self, GaloisError> {
        let prim_poly = primitive_polynomial(m)?;
        let order = 1u32 << m;
        let period = (order - 1) as usize;

        let mut exp = vec![0u8; 2 * period];
        let mut log = vec![0u16; order as usize];
        let mut seen = vec![false; order as usize];
        let mut v: u32 = 1;
        for i in 0..period {
            assert!(!seen[v as usize], "x is not primitive modulo {prim_poly:#b}");
            seen[v as usize] = true;
            exp[i] = v as u8;
            exp[i + period] = v as u8;
            log[v as usize] = i as u16;
            v <<= 1;
            if v & order != 0 {
                v ^= prim_poly;
            }
        }
        assert_eq!(v, 1, "multiplicative order of x must be q-1");

        let q = order as usize;
        let mut mul = vec![0u8; q * q];
        let mut inv = vec![0u8; q];
        for a in 1..q {
            for b in 1..q {
                mul[(a << m) | b] = exp[log[a] as usize + log[b] as usize];
            }
            inv[a] = exp[(period - log[a] as usize) % period];
        }

        Ok(FieldCtx {
            m,
            order,
            prim_poly,
            exp,
            log,
            mul,
            inv,
        })
    }

    /// Looks up the shared context for a field order `q = 2^m`.
    pub fn for_order(q: u32) -> Result<&'static FieldCtx, GaloisError> {
        if !q.is_power_of_two() {
            return Err(GaloisError::UnsupportedOrder(q));
        }
        build_field(q.trailing_zeros()).map_err(|_| GaloisError::UnsupportedOrder(q))
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Field order q = 2^m.
    #[inline]
    pub fn order(&self) -> u32 {
        self.order
    }

    #[inline]
    pub fn prim_poly(&self) -> u32 {
        self.prim_poly
    }

    /// Mask selecting the m low bits of a random word.
    #[inline]
    pub fn mask(&self) -> u8 {
        (self.order - 1) as u8
    }

    /// α^0, α^1, …, α^(q−2).
    pub fn exp_table(&self) -> &[u8] {
        &self.exp[..(self.order - 1) as usize]
    }

    /// Discrete logarithm of a non-zero element.
    pub fn log(&self, a: Gf) -> Option<u32> {
        (!a.is_zero()).then(|| u32::from(self.log[a.0 as usize]))
    }

    /// Checked conversion from an integer representation.
    pub fn element(&self, value: u32) -> Result<Gf, GaloisError> {
        if value < self.order {
            Ok(Gf(value as u8))
        } else {
            Err(GaloisError::OutOfRange {
                value,
                order: self.order,
            })
        }
    }

    /// The primitive element α (the class of x).
    pub fn primitive_element(&self) -> Gf {
        self.alpha_pow(1)
    }

    /// α^i, with i taken modulo q − 1.
    #[inline]
    pub fn alpha_pow(&self, i: u64) -> Gf {
        let period = u64::from(self.order - 1);
        Gf(self.exp[(i % period) as usize])
    }

    #[inline]
    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        Gf(self.mul[((a.0 as usize) << self.m) | b.0 as usize])
    }

    /// Products c·x for every x, indexed by x.
    #[inline]
    fn mul_row(&self, c: Gf) -> &[u8] {
        let q = self.order as usize;
        &self.mul[(c.0 as usize) << self.m..][..q]
    }

    pub fn inv(&self, a: Gf) -> Result<Gf, GaloisError> {
        if a.is_zero() {
            return Err(GaloisError::ZeroInverse);
        }
        Ok(Gf(self.inv[a.0 as usize]))
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf, GaloisError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return Gf::ONE;
        }
        if a.is_zero() {
            return Gf::ZERO;
        }
        let period = u64::from(self.order - 1);
        let l = u64::from(self.log[a.0 as usize]);
        Gf(self.exp[((l * (e % period)) % period) as usize])
    }

    /// `dst[i] += c · src[i]` over the whole slice.
    #[inline]
    pub fn axpy(&self, dst: &mut [Gf], c: Gf, src: &[Gf]) {
        debug_assert_eq!(dst.len(), src.len());
        if c.is_zero() {
            return;
        }
        if c == Gf::ONE || self.m == 1 {
            for (d, s) in dst.iter_mut().zip(src) {
                d.0 ^= s.0;
            }
            return;
        }
        let row = self.mul_row(c);
        for (d, s) in dst.iter_mut().zip(src) {
            d.0 ^= row[s.0 as usize];
        }
    }

    /// `row[i] ·= c` over the whole slice.
    #[inline]
    pub fn scale(&self, row: &mut [Gf], c: Gf) {
        if c == Gf::ONE {
            return;
        }
        let table = self.mul_row(c);
        for v in row.iter_mut() {
            v.0 = table[v.0 as usize];
        }
    }

    /// Inner product Σ a_i · b_i.
    pub fn dot(&self, a: &[Gf], b: &[Gf]) -> Gf {
        a.iter()
            .zip(b)
            .fold(Gf::ZERO, |acc, (&x, &y)| acc + self.mul(x, y))
    }
}

/// Returns the shared, immutable context for GF(2^m).
pub fn build_field(m: u32) -> Result<&'static FieldCtx, GaloisError> {
    static FIELDS: [OnceLock<FieldCtx>; 5] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    let slot = SUPPORTED_DEGREES
        .iter()
        .position(|&d| d == m)
        .ok_or(GaloisError::UnsupportedDegree(m))?;
    Ok(FIELDS[slot].get_or_init(|| FieldCtx::new(m).expect("degree checked above")))
}

#[inline]
pub fn gf_mul(field: &FieldCtx, a: Gf, b: Gf) -> Gf {
    field.mul(a, b)
}

#[inline]
pub fn gf_inv(field: &FieldCtx, a: Gf) -> Result<Gf, GaloisError> {
    field.inv(a)
}
