//! Min-plus cover product over the subset lattice.
//!
//! For `g, h : 2^[L] → ℕ ∪ {∞}` the cover product is
//! `r(Y) = min { g(Y₁) + h(Y₂) : Y₁ ∪ Y₂ = Y }`. Finite values are bounded, so
//! each function becomes a polynomial-valued function `Y ↦ x^{g(Y)}` (zero at
//! `∞`). Zeta transforms turn the cover product into pointwise polynomial
//! products, a Möbius transform recovers exact counts per `Y`, and `r(Y)` is
//! the lowest exponent with a nonzero count.

use super::INF;

/// A function in zeta-transformed polynomial form, reusable across products.
#[derive(Clone, Debug)]
pub struct Transformed {
    labels: usize,
    /// Smallest finite value; exponents are stored relative to it.
    low: u32,
    width: usize,
    /// `zeta[y * width + d]` counts `X ⊆ y` with value `low + d`.
    zeta: Vec<i64>,
}

impl Transformed {
    /// Panics if a finite value exceeds `value_bound`.
    pub fn new(values: &[u32], labels: usize, value_bound: u32) -> Self {
        assert_eq!(values.len(), 1 << labels);
        let finite = values.iter().copied().filter(|&v| v != INF);
        let (low, high) = finite.fold((INF, 0), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if low == INF {
            return Self {
                labels,
                low,
                width: 0,
                zeta: Vec::new(),
            };
        }
        assert!(high <= value_bound, "value {high} above bound {value_bound}");
        let width = (high - low) as usize + 1;
        let mut zeta = vec![0i64; values.len() * width];
        for (y, &v) in values.iter().enumerate() {
            if v != INF {
                zeta[y * width + (v - low) as usize] += 1;
            }
        }
        for bit in 0..labels {
            for y in 0..values.len() {
                if y >> bit & 1 == 1 {
                    let below = y ^ 1 << bit;
                    for d in 0..width {
                        zeta[y * width + d] += zeta[below * width + d];
                    }
                }
            }
        }
        Self {
            labels,
            low,
            width,
            zeta,
        }
    }

    pub fn cover_product(&self, other: &Transformed) -> Vec<u32> {
        assert_eq!(self.labels, other.labels);
        let size = 1usize << self.labels;
        if self.width == 0 || other.width == 0 {
            return vec![INF; size];
        }
        let width = self.width + other.width - 1;
        let mut prod = vec![0i64; size * width];
        for y in 0..size {
            let a = &self.zeta[y * self.width..(y + 1) * self.width];
            let b = &other.zeta[y * other.width..(y + 1) * other.width];
            let out = &mut prod[y * width..(y + 1) * width];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &z) in b.iter().enumerate() {
                    out[i + j] += x * z;
                }
            }
        }
        for bit in 0..self.labels {
            for y in 0..size {
                if y >> bit & 1 == 1 {
                    let below = y ^ 1 << bit;
                    for d in 0..width {
                        prod[y * width + d] -= prod[below * width + d];
                    }
                }
            }
        }
        let base = self.low + other.low;
        (0..size)
            .map(|y| {
                prod[y * width..(y + 1) * width]
                    .iter()
                    .position(|&c| c != 0)
                    .map_or(INF, |d| base + d as u32)
            })
            .collect()
    }
}

/// `r(Y) = min over Y₁ ∪ Y₂ = Y of g(Y₁) + h(Y₂)` for functions on the
/// subsets of `labels` elements, with every finite value at most `value_bound`.
pub fn fast_minplus_cover_convolution(g: &[u32], h: &[u32], labels: usize, value_bound: u32) -> Vec<u32> {
    Transformed::new(g, labels, value_bound).cover_product(&Transformed::new(h, labels, value_bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(g: &[u32], h: &[u32]) -> Vec<u32> {
        let mut r = vec![INF; g.len()];
        for (a, &x) in g.iter().enumerate() {
            for (b, &y) in h.iter().enumerate() {
                if x != INF && y != INF {
                    r[a | b] = r[a | b].min(x + y);
                }
            }
        }
        r
    }

    #[test]
    fn empty_ground_set() {
        assert_eq!(fast_minplus_cover_convolution(&[3], &[4], 0, 10), vec![7]);
    }

    #[test]
    fn indicator_input() {
        // g is 0 on {0} only
        let g = [INF, 0, INF, INF];
        let h = [5, 1, 2, 9];
        assert_eq!(fast_minplus_cover_convolution(&g, &h, 2, 10), vec![INF, 1, INF, 2]);
    }

    #[test]
    fn matches_direct_on_pseudorandom_tables() {
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..200 {
            let draw = |r: u64| if r.is_multiple_of(4) { INF } else { (r >> 8) as u32 % 9 };
            let g: Vec<u32> = (0..16).map(|_| draw(next())).collect();
            let h: Vec<u32> = (0..16).map(|_| draw(next())).collect();
            assert_eq!(fast_minplus_cover_convolution(&g, &h, 4, 8), direct(&g, &h));
        }
    }
}
