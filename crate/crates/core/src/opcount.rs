//! Scalar abstraction for the per-shift kernels, plus an instrumented scalar
//! that tallies complex additions, multiplications and divisions.
//!
//! The per-shift recurrences of every method are written once, generically
//! over [`KernelScalar`]. Production code instantiates them with [`C64`];
//! the cost audit instantiates them with [`Counted`].

use std::cell::Cell;
use std::ops::{Add, Div, Mul, Sub};

use crate::linalg::C64;

pub trait KernelScalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn from_c64(v: C64) -> Self;
    fn to_c64(self) -> C64;

    fn from_real(v: f64) -> Self {
        Self::from_c64(C64::new(v, 0.0))
    }
}

impl KernelScalar for C64 {
    #[inline(always)]
    fn from_c64(v: C64) -> Self {
        v
    }
    #[inline(always)]
    fn to_c64(self) -> C64 {
        self
    }
}

/// Operation tallies. Subtraction counts as an addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub add: usize,
    pub mul: usize,
    pub div: usize,
}

impl OpCounts {
    pub fn total(&self) -> usize {
        self.add + self.mul + self.div
    }
}

thread_local! {
    static COUNTS: Cell<OpCounts> = const { Cell::new(OpCounts { add: 0, mul: 0, div: 0 }) };
}

/// Complex scalar whose arithmetic is tallied in a thread-local counter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Counted(pub C64);

impl Counted {
    pub fn reset() {
        COUNTS.with(|c| c.set(OpCounts::default()));
    }

    pub fn counts() -> OpCounts {
        COUNTS.with(|c| c.get())
    }

    /// Runs `f` and returns the operations it performed.
    pub fn measure<F: FnOnce()>(f: F) -> OpCounts {
        let before = Self::counts();
        f();
        let after = Self::counts();
        OpCounts {
            add: after.add - before.add,
            mul: after.mul - before.mul,
            div: after.div - before.div,
        }
    }

    fn bump(update: impl FnOnce(&mut OpCounts)) {
        COUNTS.with(|c| {
            let mut v = c.get();
            update(&mut v);
            c.set(v);
        });
    }
}

impl Add for Counted {
    type Output = Counted;
    fn add(self, rhs: Counted) -> Counted {
        Counted::bump(|c| c.add += 1);
        Counted(self.0 + rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Sub for Counted {
    type Output = Counted;
    fn sub(self, rhs: Counted) -> Counted {
        Counted::bump(|c| c.add += 1);
        Counted(self.0 - rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for Counted {
    type Output = Counted;
    fn mul(self, rhs: Counted) -> Counted {
        Counted::bump(|c| c.mul += 1);
        Counted(self.0 * rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Counted {
    type Output = Counted;
    fn div(self, rhs: Counted) -> Counted {
        Counted::bump(|c| c.div += 1);
        Counted(self.0 / rhs.0)
    }
}

impl KernelScalar for Counted {
    fn from_c64(v: C64) -> Self {
        Counted(v)
    }
    fn to_c64(self) -> C64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_each_operation() {
        let a = Counted::from_real(2.0);
        let b = Counted::from_real(3.0);
        let ops = Counted::measure(|| {
            let _ = (a + b) * (a - b) / b;
        });
        assert_eq!(
            ops,
            OpCounts {
                add: 2,
                mul: 1,
                div: 1
            }
        );
        assert_eq!(ops.total(), 4);
    }
}
