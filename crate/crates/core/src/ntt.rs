//! Number-theoretic transform over two 62-bit primes, Montgomery form.

/// A prime `p < 2^62` with `2^k | p − 1` and a primitive root.
#[derive(Debug, Clone, Copy)]
pub struct NttPrime {
    pub p: u64,
    pub two_adicity: u32,
    pub generator: u64,
}

/// `65535·2^46 + 1`
pub const P1: NttPrime = NttPrime { p: 4_611_615_649_683_210_241, two_adicity: 46, generator: 11 };
/// `1048545·2^42 + 1`
pub const P2: NttPrime = NttPrime { p: 4_611_549_678_985_543_681, two_adicity: 42, generator: 19 };

#[derive(Debug, Clone, Copy)]
pub(crate) struct Montgomery {
    p: u64,
    /// `−p⁻¹ mod 2^64`
    pinv_neg: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl Montgomery {
    pub(crate) fn new(p: u64) -> Self {
        debug_assert!(p % 2 == 1 && p < 1 << 62);
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Self { p, pinv_neg: inv.wrapping_neg(), r2 }
    }

    pub(crate) fn modulus(&self) -> u64 {
        self.p
    }

    #[inline(always)]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv_neg);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline(always)]
    pub(crate) fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    /// Into Montgomery form.
    pub(crate) fn enter(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    /// Out of Montgomery form.
    pub(crate) fn leave(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    pub(crate) fn pow(&self, base: u64, mut e: u64) -> u64 {
        let mut acc = self.enter(1);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

/// In-place cyclic NTT of length `2^k` (values in Montgomery form).
pub(crate) struct Ntt {
    pub(crate) m: Montgomery,
    prime: NttPrime,
}

impl Ntt {
    pub(crate) fn new(prime: NttPrime) -> Self {
        Self { m: Montgomery::new(prime.p), prime }
    }

    fn root_of_unity(&self, log_n: u32, inverse: bool) -> u64 {
        assert!(log_n <= self.prime.two_adicity, "transform too long for this prime");
        let g = self.m.enter(self.prime.generator);
        let w = self.m.pow(g, (self.prime.p - 1) >> log_n);
        if inverse {
            self.m.pow(w, (1u64 << log_n) - 1)
        } else {
            w
        }
    }

    pub(crate) fn transform(&self, a: &mut [u64], inverse: bool) {
        let n = a.len();
        assert!(n.is_power_of_two());
        let mut j = 0;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let m = &self.m;
        let mut twiddles = Vec::with_capacity(n / 2);
        let mut len = 2;
        let mut stage = 1;
        while len <= n {
            let w = self.root_of_unity(stage, inverse);
            let half = len / 2;
            twiddles.clear();
            let mut cur = m.enter(1);
            for _ in 0..half {
                twiddles.push(cur);
                cur = m.mul(cur, w);
            }
            for chunk in a.chunks_exact_mut(len) {
                let (lo, hi) = chunk.split_at_mut(half);
                for ((x, y), &tw) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                    let u = *x;
                    let v = m.mul(*y, tw);
                    *x = m.add(u, v);
                    *y = m.sub(u, v);
                }
            }
            len <<= 1;
            stage += 1;
        }
        if inverse {
            let n_inv = m.pow(m.enter(n as u64 % self.prime.p), self.prime.p - 2);
            for x in a.iter_mut() {
                *x = m.mul(*x, n_inv);
            }
        }
    }
}

/// Inverse of `a` modulo `p` (p prime), plain integers.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let m = Montgomery::new(p);
    m.leave(m.pow(m.enter(a), p - 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn montgomery_roundtrip_and_mul() {
        for prime in [P1, P2] {
            let m = Montgomery::new(prime.p);
            for &(a, b) in &[(3u64, 5u64), (prime.p - 1, prime.p - 1), (1 << 61, 12345)] {
                let want = (a as u128 * b as u128 % prime.p as u128) as u64;
                assert_eq!(m.leave(m.mul(m.enter(a), m.enter(b))), want);
            }
            assert_eq!(inv_mod(2, prime.p) as u128 * 2 % prime.p as u128, 1);
        }
    }

    #[test]
    fn cyclic_convolution_small() {
        let ntt = Ntt::new(P1);
        let m = &ntt.m;
        let a = [1u64, 2, 3, 0, 0, 0, 0, 0];
        let b = [4u64, 5, 0, 0, 0, 0, 0, 0];
        let mut fa: Vec<u64> = a.iter().map(|&x| m.enter(x)).collect();
        let mut fb: Vec<u64> = b.iter().map(|&x| m.enter(x)).collect();
        ntt.transform(&mut fa, false);
        ntt.transform(&mut fb, false);
        let mut c: Vec<u64> = fa.iter().zip(&fb).map(|(&x, &y)| m.mul(x, y)).collect();
        ntt.transform(&mut c, true);
        let c: Vec<u64> = c.iter().map(|&x| m.leave(x)).collect();
        assert_eq!(c, vec![4, 13, 22, 15, 0, 0, 0, 0]);
    }
}
