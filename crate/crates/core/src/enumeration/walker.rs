//! Odometer enumeration of a component space `F_p^N` with incrementally
//! maintained check vectors.
//!
//! Every step of the odometer adds one column per touched digit to the
//! accumulated check vector `A h` (and optionally to the element `B h`).
//! Over `F_2` each check block is packed into one machine word and columns
//! are added with XOR.

use std::ops::Range;

use super::component::ComponentSpace;
use crate::error::{PcnError, Result};
use crate::gf::{FieldCtx, FieldElement, Matrix};

/// Coordinates of an element of the big field over `F_p`.
#[derive(Clone, Copy, Debug)]
pub enum ElemRef<'a> {
    /// Bit `i` of the packed words is the coefficient of `x^i` (`p = 2`).
    Bits(&'a [u64]),
    /// One residue per coefficient, low to high.
    Digits(&'a [u32]),
}

impl ElemRef<'_> {
    pub fn to_element(&self, ctx: &FieldCtx) -> FieldElement {
        let m = ctx.m();
        let v = match self {
            ElemRef::Bits(w) => (0..m).map(|i| (w[i / 64] >> (i % 64)) & 1).collect(),
            ElemRef::Digits(d) => d.iter().map(|&x| x as u64).collect(),
        };
        ctx.element_from_vec(v)
    }
}

/// Packed owned coordinates, the owning counterpart of [`ElemRef`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Packed {
    Bits(Vec<u64>),
    Digits(Vec<u32>),
}

impl Packed {
    pub fn from_element(p: u64, a: &FieldElement) -> Self {
        if p == 2 {
            let mut words = vec![0u64; a.coeffs().len().div_ceil(64).max(1)];
            for (i, &c) in a.coeffs().iter().enumerate() {
                words[i / 64] |= c << (i % 64);
            }
            Packed::Bits(words)
        } else {
            Packed::Digits(a.coeffs().iter().map(|&c| c as u32).collect())
        }
    }

    pub fn as_ref(&self) -> ElemRef<'_> {
        match self {
            Packed::Bits(w) => ElemRef::Bits(w),
            Packed::Digits(d) => ElemRef::Digits(d),
        }
    }

    /// `self += other` over `F_p`.
    pub fn add_assign(&mut self, other: ElemRef<'_>, p: u64) {
        match (self, other) {
            (Packed::Bits(a), ElemRef::Bits(b)) => a.iter_mut().zip(b).for_each(|(x, y)| *x ^= y),
            (Packed::Digits(a), ElemRef::Digits(b)) => add_digits(a, b, p as u32),
            _ => unreachable!("mixed packing"),
        }
    }

    /// Overwrites `self` with `a + b`.
    pub fn set_sum(&mut self, a: ElemRef<'_>, b: ElemRef<'_>, p: u64) {
        match (self, a, b) {
            (Packed::Bits(out), ElemRef::Bits(x), ElemRef::Bits(y)) => {
                for ((o, u), v) in out.iter_mut().zip(x).zip(y) {
                    *o = u ^ v;
                }
            }
            (Packed::Digits(out), ElemRef::Digits(x), ElemRef::Digits(y)) => {
                let p = p as u32;
                for ((o, &u), &v) in out.iter_mut().zip(x).zip(y) {
                    let s = u + v;
                    *o = if s >= p { s - p } else { s };
                }
            }
            _ => unreachable!("mixed packing"),
        }
    }

    /// Base-`p` index `sum c_i p^i`, for fields with at most `2^64` elements.
    pub fn index(&self, p: u64) -> u64 {
        match self {
            Packed::Bits(w) => w[0],
            Packed::Digits(d) => d.iter().rev().fold(0u64, |acc, &c| acc * p + c as u64),
        }
    }
}

#[inline]
fn add_digits(a: &mut [u32], b: &[u32], p: u32) {
    for (x, &y) in a.iter_mut().zip(b) {
        let s = *x + y;
        *x = if s >= p { s - p } else { s };
    }
}

enum Layout {
    Binary {
        /// Per column, one word per check block.
        checks: Vec<Vec<u64>>,
        elems: Vec<Vec<u64>>,
    },
    General {
        /// Per column, the stacked check rows.
        checks: Vec<Vec<u32>>,
        blocks: Vec<Range<usize>>,
        elems: Vec<Vec<u32>>,
    },
}

/// Enumerates `h` in `F_p^N` by base-`p` index and reports the vectors that
/// pass every check.
pub struct Walker {
    p: u64,
    dims: usize,
    total: u64,
    with_elements: bool,
    elem_len: usize,
    layout: Layout,
}

impl Walker {
    pub fn new(space: &ComponentSpace, ctx: &FieldCtx, with_elements: bool) -> Result<Self> {
        let p = space.p;
        let dims = space.dim();
        let total = u32::try_from(dims)
            .ok()
            .and_then(|d| p.checked_pow(d))
            .filter(|&t| t < 1 << 62)
            .ok_or_else(|| PcnError::InvalidArgument(format!("component of dimension {dims} over F_{p} is too large to enumerate")))?;
        let m = ctx.m();
        let basis_cols: Vec<&[u64]> = space.basis.iter().map(|b| b.coeffs()).collect();
        let layout = if p == 2 {
            let checks = (0..dims).map(|j| space.checks.iter().map(|r| pack_column(r, j)).collect()).collect();
            let words = m.div_ceil(64).max(1);
            let elems = basis_cols
                .iter()
                .map(|c| {
                    let mut w = vec![0u64; words];
                    for (i, &b) in c.iter().enumerate() {
                        w[i / 64] |= b << (i % 64);
                    }
                    w
                })
                .collect();
            Layout::Binary { checks, elems }
        } else {
            let mut blocks = Vec::with_capacity(space.checks.len());
            let mut start = 0;
            for r in &space.checks {
                blocks.push(start..start + r.rows());
                start += r.rows();
            }
            let checks = (0..dims)
                .map(|j| space.checks.iter().flat_map(|r| r.column(j)).map(|x| x as u32).collect())
                .collect();
            let elems = basis_cols.iter().map(|c| c.iter().map(|&x| x as u32).collect()).collect();
            Layout::General { checks, blocks, elems }
        };
        Ok(Self { p, dims, total, with_elements, elem_len: m, layout })
    }

    /// `p^N`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of passing vectors with index in `range`.
    pub fn count(&self, range: Range<u64>) -> u64 {
        self.visit(range, |_| {})
    }

    /// Calls `f` with the element `B h` of every passing `h` whose index lies
    /// in `range`, in index order; returns the number of passes. Elements are
    /// only available when the walker was built with elements.
    pub fn visit(&self, range: Range<u64>, mut f: impl FnMut(ElemRef<'_>)) -> u64 {
        let end = range.end.min(self.total);
        let start = range.start.min(end);
        if start == end {
            return 0;
        }
        let p = self.p;
        let mut digits = vec![0u64; self.dims];
        let mut rest = start;
        for d in digits.iter_mut() {
            *d = rest % p;
            rest /= p;
        }
        let mut passes = 0u64;
        match &self.layout {
            Layout::Binary { checks, elems } => {
                let mut acc = vec![0u64; checks.first().map_or(0, Vec::len)];
                let mut elem = vec![0u64; self.elem_len.div_ceil(64).max(1)];
                for (j, &d) in digits.iter().enumerate() {
                    if d == 1 {
                        xor_into(&mut acc, &checks[j]);
                        if self.with_elements {
                            xor_into(&mut elem, &elems[j]);
                        }
                    }
                }
                let mut bits = start;
                for _ in start..end {
                    if acc.iter().all(|&w| w != 0) {
                        passes += 1;
                        f(ElemRef::Bits(&elem));
                    }
                    // Odometer over bits: flip trailing ones and the next zero.
                    let flips = (bits.trailing_ones() + 1).min(self.dims as u32) as usize;
                    for j in 0..flips {
                        xor_into(&mut acc, &checks[j]);
                        if self.with_elements {
                            xor_into(&mut elem, &elems[j]);
                        }
                    }
                    bits += 1;
                }
            }
            Layout::General { checks, blocks, elems } => {
                let p32 = p as u32;
                let mut acc = vec![0u32; checks.first().map_or(0, Vec::len)];
                let mut elem = vec![0u32; self.elem_len];
                for (j, &d) in digits.iter().enumerate() {
                    for _ in 0..d {
                        add_digits(&mut acc, &checks[j], p32);
                        if self.with_elements {
                            add_digits(&mut elem, &elems[j], p32);
                        }
                    }
                }
                for _ in start..end {
                    if blocks.iter().all(|b| acc[b.clone()].iter().any(|&x| x != 0)) {
                        passes += 1;
                        f(ElemRef::Digits(&elem));
                    }
                    for j in 0..self.dims {
                        add_digits(&mut acc, &checks[j], p32);
                        if self.with_elements {
                            add_digits(&mut elem, &elems[j], p32);
                        }
                        digits[j] += 1;
                        if digits[j] < p {
                            break;
                        }
                        digits[j] = 0;
                    }
                }
            }
        }
        passes
    }
}

#[inline]
fn xor_into(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

/// Column `j` of a check matrix over `F_2` packed into one word.
fn pack_column(r: &Matrix, j: usize) -> u64 {
    debug_assert!(r.rows() <= 64);
    (0..r.rows()).fold(0u64, |acc, i| acc | (r.get(i, j) << i))
}
