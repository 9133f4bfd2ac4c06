//! Indexing of message tuples in F_q^{nt}.
//!
//! Coordinates are laid out symbol-major: coordinate `s * n + j` holds the
//! `s`-th symbol of message `j`. A tuple's index is its big-endian base-q
//! number, so numeric order is lexicographic order on tuples, and the tuple
//! space for block length `t1 + t2` is exactly the product of the spaces for
//! `t1` and `t2` (index `v1 * |V2| + v2`).

use crate::instance::MessageSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleSpace {
    q: u32,
    n: usize,
    t: usize,
    size: usize,
    /// `place[c] = q^(dims - 1 - c)`
    place: Vec<usize>,
}

impl TupleSpace {
    /// Returns `None` if `q^(n t)` exceeds `cap`.
    pub fn new(q: u32, n: usize, t: usize, cap: usize) -> Option<Self> {
        let dims = n * t;
        let mut size = 1usize;
        for _ in 0..dims {
            size = size.checked_mul(q as usize)?;
            if size > cap {
                return None;
            }
        }
        if size > cap {
            return None;
        }
        let mut place = vec![1usize; dims];
        for c in (0..dims.saturating_sub(1)).rev() {
            place[c] = place[c + 1] * q as usize;
        }
        Some(TupleSpace { q, n, t, size, place })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn messages(&self) -> usize {
        self.n
    }

    pub fn block_length(&self) -> usize {
        self.t
    }

    pub fn dims(&self) -> usize {
        self.place.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn coordinate(&self, message: usize, symbol: usize) -> usize {
        symbol * self.n + message
    }

    #[inline]
    pub fn digit(&self, x: usize, coord: usize) -> u32 {
        ((x / self.place[coord]) % self.q as usize) as u32
    }

    pub fn digits(&self, x: usize) -> Vec<u32> {
        (0..self.dims()).map(|c| self.digit(x, c)).collect()
    }

    pub fn index_of(&self, digits: &[u32]) -> usize {
        assert_eq!(digits.len(), self.dims());
        digits.iter().fold(0usize, |acc, &d| acc * self.q as usize + d as usize)
    }

    /// All coordinates belonging to the given messages, ordered by symbol
    /// then message.
    pub fn coords_of(&self, messages: &MessageSet) -> Vec<usize> {
        (0..self.t).flat_map(|s| messages.iter().map(move |&j| s * self.n + j)).collect()
    }

    /// Mixed-radix index of `x` restricted to `coords`, in the given order.
    pub fn project(&self, x: usize, coords: &[usize]) -> usize {
        coords.iter().fold(0usize, |acc, &c| acc * self.q as usize + self.digit(x, c) as usize)
    }

    pub fn project_digits(&self, x: usize, coords: &[usize]) -> Vec<u32> {
        coords.iter().map(|&c| self.digit(x, c)).collect()
    }

    pub fn is_zero_on(&self, x: usize, coords: &[usize]) -> bool {
        coords.iter().all(|&c| self.digit(x, c) == 0)
    }

    pub fn sub(&self, x: usize, z: usize) -> usize {
        let q = self.q;
        (0..self.dims()).fold(0usize, |acc, c| {
            let (a, b) = (self.digit(x, c), self.digit(z, c));
            acc * q as usize + ((a + q - b) % q) as usize
        })
    }

    pub fn add(&self, x: usize, z: usize) -> usize {
        let q = self.q;
        (0..self.dims()).fold(0usize, |acc, c| acc * q as usize + ((self.digit(x, c) + self.digit(z, c)) % q) as usize)
    }

    pub fn neg(&self, x: usize) -> usize {
        self.sub(0, x)
    }

    /// Base-q rendering, symbol blocks separated by `|`.
    pub fn label(&self, x: usize) -> String {
        let digits = self.digits(x);
        let render = |block: &[u32]| -> String {
            if self.q <= 10 {
                block.iter().map(|d| char::from(b'0' + *d as u8)).collect()
            } else {
                block.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
            }
        };
        if self.n == 0 {
            return "()".to_string();
        }
        digits.chunks(self.n).map(render).collect::<Vec<_>>().join("|")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let sp = TupleSpace::new(3, 2, 2, 1 << 20).unwrap();
        assert_eq!(sp.size(), 81);
        for x in 0..sp.size() {
            assert_eq!(sp.index_of(&sp.digits(x)), x);
            assert_eq!(sp.add(sp.sub(x, 7), 7), x);
        }
    }

    #[test]
    fn layout_is_symbol_major() {
        let sp = TupleSpace::new(2, 2, 2, 1 << 20).unwrap();
        // message 1 (0-based), symbol 0 -> coordinate 1
        assert_eq!(sp.coordinate(1, 0), 1);
        assert_eq!(sp.coords_of(&[1].into()), vec![1, 3]);
        assert_eq!(sp.label(sp.index_of(&[0, 1, 1, 0])), "01|10");
    }

    #[test]
    fn cap_enforced() {
        assert!(TupleSpace::new(2, 5, 1, 31).is_none());
        assert!(TupleSpace::new(2, 5, 1, 32).is_some());
        assert_eq!(TupleSpace::new(2, 0, 1, 1).unwrap().size(), 1);
    }
}
