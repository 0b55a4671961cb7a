//! Per-vertex color books.
//!
//! `C_H(v)` lists the colors carried by higher-ranked neighbors together with
//! their multiplicities; `C_L(v)` lists every other palette color. Both are
//! doubly linked lists over colors with an index from color to node, so
//! moving a color between them is O(1).

use std::collections::HashMap;

pub type Color = u32;

const NIL: Color = 0;

#[derive(Debug, Clone, Copy)]
struct HighNode {
    mult: u32,
    prev: Color,
    next: Color,
}

/// Colors of higher-ranked neighbors, keyed by color.
#[derive(Debug, Clone, Default)]
pub(crate) struct HighColors {
    nodes: HashMap<Color, HighNode>,
    head: Color,
    tail: Color,
    total: u32,
}

impl HighColors {
    fn link_back(&mut self, c: Color) {
        let tail = self.tail;
        self.nodes.insert(
            c,
            HighNode {
                mult: 1,
                prev: tail,
                next: NIL,
            },
        );
        if tail == NIL {
            self.head = c;
        } else {
            self.nodes.get_mut(&tail).unwrap().next = c;
        }
        self.tail = c;
    }

    fn unlink(&mut self, c: Color) {
        let node = self.nodes.remove(&c).unwrap();
        match node.prev {
            NIL => self.head = node.next,
            p => self.nodes.get_mut(&p).unwrap().next = node.next,
        }
        match node.next {
            NIL => self.tail = node.prev,
            n => self.nodes.get_mut(&n).unwrap().prev = node.prev,
        }
    }

    /// Returns `true` when `c` is new to the list.
    fn increment(&mut self, c: Color) -> bool {
        self.total += 1;
        match self.nodes.get_mut(&c) {
            Some(node) => {
                node.mult += 1;
                false
            }
            None => {
                self.link_back(c);
                true
            }
        }
    }

    /// Returns `true` when the multiplicity of `c` dropped to zero.
    fn decrement(&mut self, c: Color) -> bool {
        let node = self
            .nodes
            .get_mut(&c)
            .unwrap_or_else(|| panic!("color {c} not present among higher neighbors"));
        self.total -= 1;
        node.mult -= 1;
        if node.mult == 0 {
            self.unlink(c);
            true
        } else {
            false
        }
    }

    fn iter(&self) -> impl Iterator<Item = Color> + '_ {
        let mut cur = self.head;
        std::iter::from_fn(move || {
            if cur == NIL {
                return None;
            }
            let c = cur;
            cur = self.nodes[&c].next;
            Some(c)
        })
    }
}

/// The colors not in `C_H`, as a dense linked list over the palette.
#[derive(Debug, Clone)]
pub(crate) struct LowColors {
    prev: Vec<Color>,
    next: Vec<Color>,
    present: Vec<bool>,
    head: Color,
    tail: Color,
    len: u32,
}

impl LowColors {
    fn build(palette: u32, high: &HighColors) -> Self {
        let size = palette as usize + 1;
        let mut low = LowColors {
            prev: vec![NIL; size],
            next: vec![NIL; size],
            present: vec![false; size],
            head: NIL,
            tail: NIL,
            len: 0,
        };
        for c in 1..=palette {
            if !high.nodes.contains_key(&c) {
                low.push_back(c);
            }
        }
        low
    }

    fn push_back(&mut self, c: Color) {
        debug_assert!(!self.present[c as usize]);
        self.present[c as usize] = true;
        self.prev[c as usize] = self.tail;
        self.next[c as usize] = NIL;
        if self.tail == NIL {
            self.head = c;
        } else {
            self.next[self.tail as usize] = c;
        }
        self.tail = c;
        self.len += 1;
    }

    fn remove(&mut self, c: Color) {
        debug_assert!(self.present[c as usize]);
        self.present[c as usize] = false;
        let (p, n) = (self.prev[c as usize], self.next[c as usize]);
        if p == NIL {
            self.head = n;
        } else {
            self.next[p as usize] = n;
        }
        if n == NIL {
            self.tail = p;
        } else {
            self.prev[n as usize] = p;
        }
        self.len -= 1;
    }

    fn iter(&self) -> impl Iterator<Item = Color> + '_ {
        let mut cur = self.head;
        std::iter::from_fn(move || {
            if cur == NIL {
                return None;
            }
            let c = cur;
            cur = self.next[c as usize];
            Some(c)
        })
    }
}

/// `C_H(v)` with multiplicities, plus `C_L(v)` once materialized.
#[derive(Debug, Clone, Default)]
pub struct ColorBook {
    high: HighColors,
    low: Option<LowColors>,
}

impl ColorBook {
    /// A higher-ranked neighbor now carries color `c`.
    pub(crate) fn add_high(&mut self, c: Color) {
        if self.high.increment(c) {
            if let Some(low) = self.low.as_mut() {
                low.remove(c);
            }
        }
    }

    /// A higher-ranked neighbor no longer carries color `c`.
    pub(crate) fn remove_high(&mut self, c: Color) {
        if self.high.decrement(c) {
            if let Some(low) = self.low.as_mut() {
                low.push_back(c);
            }
        }
    }

    /// Builds `C_L` as the palette minus `C_H`. O(palette).
    pub(crate) fn materialize(&mut self, palette: u32) {
        if self.low.is_none() {
            self.low = Some(LowColors::build(palette, &self.high));
        }
    }

    pub fn is_materialized(&self) -> bool {
        self.low.is_some()
    }

    /// `μ_H(c)`: number of higher-ranked neighbors colored `c`.
    pub fn multiplicity(&self, c: Color) -> u32 {
        self.high.nodes.get(&c).map_or(0, |n| n.mult)
    }

    #[inline]
    pub fn in_high(&self, c: Color) -> bool {
        self.high.nodes.contains_key(&c)
    }

    /// Number of distinct colors in `C_H`.
    pub fn high_len(&self) -> usize {
        self.high.nodes.len()
    }

    /// Sum of all multiplicities, equal to `|H_v|`.
    pub fn high_total(&self) -> u32 {
        self.high.total
    }

    pub fn high_colors(&self) -> impl Iterator<Item = Color> + '_ {
        self.high.iter()
    }

    /// `C_L` in list order; empty when not materialized.
    pub fn low_colors(&self) -> impl Iterator<Item = Color> + '_ {
        self.low.iter().flat_map(LowColors::iter)
    }

    pub fn low_len(&self) -> Option<usize> {
        self.low.as_ref().map(|l| l.len as usize)
    }
}
