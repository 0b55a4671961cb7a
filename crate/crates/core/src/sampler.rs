//! Constant-time uniform sampling among the elements with a non-zero value.
//!
//! A dense array holds the live `(element, value)` pairs in its first `nis`
//! slots and a position array maps each element to its slot. Removing an
//! element swaps the last live slot into the hole, so every update touches a
//! constant number of array cells. Space is O(n) rather than the polylog of
//! ℓ₀-sampling sketches, in exchange for O(1) worst-case time.

use rand::Rng;

use crate::error::{Error, Result};

const ABSENT: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct NonZeroSampler {
    slots: Vec<(u32, u64)>,
    pos: Vec<usize>,
    nis: usize,
    touches: u64,
    last_touches: u32,
}

impl NonZeroSampler {
    pub fn new(n: usize) -> Self {
        NonZeroSampler {
            slots: vec![(0, 0); n],
            pos: vec![ABSENT; n],
            nis: 0,
            touches: 0,
            last_touches: 0,
        }
    }

    /// Builds the sampler over an initial value vector.
    pub fn from_values(values: &[u64]) -> Self {
        let mut s = NonZeroSampler::new(values.len());
        for (u, &d) in values.iter().enumerate() {
            if d > 0 {
                s.update(u, d as i64).expect("non-negative initial value");
            }
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.pos.len()
    }

    /// Number of non-zero elements.
    pub fn nis(&self) -> usize {
        self.nis
    }

    pub fn value(&self, u: usize) -> u64 {
        match self.pos[u] {
            ABSENT => 0,
            i => self.slots[i].1,
        }
    }

    /// Slot of `u` in the dense array, `None` when its value is zero.
    pub fn position(&self, u: usize) -> Option<usize> {
        match self.pos[u] {
            ABSENT => None,
            i => Some(i),
        }
    }

    /// The live prefix of the dense array.
    pub fn live(&self) -> &[(u32, u64)] {
        &self.slots[..self.nis]
    }

    /// Adds `delta` to the value of `u`.
    pub fn update(&mut self, u: usize, delta: i64) -> Result<()> {
        let mut touches = 1u32;
        let slot = self.pos[u];
        if slot == ABSENT {
            if delta < 0 {
                return Err(Error::NegativeValue {
                    element: u,
                    value: delta,
                });
            }
            if delta > 0 {
                self.slots[self.nis] = (u as u32, delta as u64);
                self.pos[u] = self.nis;
                self.nis += 1;
                touches += 2;
            }
        } else {
            let current = self.slots[slot].1 as i64;
            touches += 1;
            let next = current + delta;
            if next < 0 {
                return Err(Error::NegativeValue {
                    element: u,
                    value: next,
                });
            }
            if next > 0 {
                self.slots[slot].1 = next as u64;
                touches += 1;
            } else {
                let last = self.nis - 1;
                let moved = self.slots[last];
                self.slots[slot] = moved;
                self.pos[moved.0 as usize] = slot;
                self.pos[u] = ABSENT;
                self.nis -= 1;
                touches += 4;
            }
        }
        self.record(touches);
        Ok(())
    }

    /// Uniform draw among the non-zero elements.
    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<usize> {
        if self.nis == 0 {
            self.record(0);
            return None;
        }
        let j = rng.random_range(0..self.nis);
        self.record(1);
        Some(self.slots[j].0 as usize)
    }

    fn record(&mut self, touches: u32) {
        self.last_touches = touches;
        self.touches += touches as u64;
    }

    /// Array cells read or written by the most recent operation.
    pub fn last_touches(&self) -> u32 {
        self.last_touches
    }

    pub fn total_touches(&self) -> u64 {
        self.touches
    }

    /// Checks the slot/position invariant against an explicit value vector.
    pub fn check_against(&self, values: &[u64]) -> Result<()> {
        let nonzero = values.iter().filter(|&&d| d > 0).count();
        if nonzero != self.nis {
            return Err(Error::Invariant(format!(
                "nis {} but {} non-zero values",
                self.nis, nonzero
            )));
        }
        for (u, &d) in values.iter().enumerate() {
            match (d, self.pos[u]) {
                (0, ABSENT) => {}
                (0, p) => {
                    return Err(Error::Invariant(format!("zero element {u} at slot {p}")));
                }
                (_, ABSENT) => {
                    return Err(Error::Invariant(format!("non-zero element {u} missing")));
                }
                (d, p) => {
                    if p >= self.nis || self.slots[p] != (u as u32, d) {
                        return Err(Error::Invariant(format!(
                            "element {u} slot {p} holds {:?}, expected ({u}, {d})",
                            self.slots[p]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
