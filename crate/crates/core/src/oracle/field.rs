//! Arithmetic modulo an odd prime below 2^63, in Montgomery form.

use crate::error::{Error, Result};

/// 29 * 2^57 + 1; supports power-of-two transforms up to length 2^57.
pub const DEFAULT_PRIME: u64 = 4_179_340_454_199_820_289;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field {
    p: u64,
    neg_inv: u64,
    r2: u64,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'next: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'next;
            }
        }
        return false;
    }
    true
}

impl Field {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..1 << 63).contains(&p) || !is_prime(p) {
            return Err(Error::Oracle(format!("{p} is not an odd prime below 2^63")));
        }
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        Ok(Field {
            p,
            neg_inv: inv.wrapping_neg(),
            r2: mul_mod(r, r, p),
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    pub fn from_u64(&self, x: u64) -> u64 {
        self.redc((x % self.p) as u128 * self.r2 as u128)
    }

    #[inline]
    pub fn to_u64(&self, x: u64) -> u64 {
        self.redc(x as u128)
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        self.from_u64(1)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    /// Element of multiplicative order exactly `n` (a power of two), if `n | p - 1`.
    pub fn root_of_unity(&self, n: usize) -> Option<u64> {
        let n = n as u64;
        if !n.is_power_of_two() || !(self.p - 1).is_multiple_of(n) {
            return None;
        }
        (2..).map(|g| self.pow(self.from_u64(g), (self.p - 1) / n)).find(|&y| {
            n == 1 || self.pow(y, n / 2) != self.one()
        })
    }

    /// In-place cyclic transform `a_k <- sum_j a_j root^(jk)`; `root` has order `a.len()`.
    pub fn ntt(&self, a: &mut [u64], root: u64) {
        let n = a.len();
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
        let mut len = 2;
        while len <= n {
            let w = self.pow(root, (n / len) as u64);
            for start in (0..n).step_by(len) {
                let mut wk = self.one();
                for k in 0..len / 2 {
                    let x = a[start + k];
                    let y = self.mul(a[start + k + len / 2], wk);
                    a[start + k] = self.add(x, y);
                    a[start + k + len / 2] = self.sub(x, y);
                    wk = self.mul(wk, w);
                }
            }
            len <<= 1;
        }
    }

    /// Coefficients of the polynomial with values `ys` at `root^j`.
    pub fn interpolate_roots(&self, ys: &[u64], root: u64) -> Vec<u64> {
        let mut a = ys.to_vec();
        self.ntt(&mut a, self.inv(root));
        let scale = self.inv(self.from_u64(ys.len() as u64));
        a.iter().map(|&x| self.mul(x, scale)).collect()
    }

    /// Coefficients of the polynomial through `(xs[i], ys[i])`, quadratic time.
    pub fn interpolate(&self, xs: &[u64], ys: &[u64]) -> Vec<u64> {
        let k = xs.len();
        // master = prod (x - xs[i]), low degree first
        let mut master = vec![self.zero(); k + 1];
        master[0] = self.one();
        for (deg, &x) in xs.iter().enumerate() {
            for d in (0..=deg).rev() {
                let c = master[d];
                master[d + 1] = self.add(master[d + 1], c);
                master[d] = self.neg(self.mul(c, x));
            }
        }
        let mut out = vec![self.zero(); k];
        let mut q = vec![self.zero(); k];
        for i in 0..k {
            if ys[i] == 0 {
                continue;
            }
            // q = master / (x - xs[i]) by synthetic division from the top
            let mut carry = self.zero();
            for d in (0..k).rev() {
                carry = self.add(master[d + 1], self.mul(carry, xs[i]));
                q[d] = carry;
            }
            let mut denom = self.zero();
            for d in (0..k).rev() {
                denom = self.add(self.mul(denom, xs[i]), q[d]);
            }
            let scale = self.mul(ys[i], self.inv(denom));
            for d in 0..k {
                out[d] = self.add(out[d], self.mul(q[d], scale));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_prime_is_prime() {
        assert!(is_prime(DEFAULT_PRIME));
        assert_eq!(DEFAULT_PRIME, 29 * (1u64 << 57) + 1);
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
    }

    #[test]
    fn arithmetic_round_trip() {
        for p in [DEFAULT_PRIME, 2_147_483_647, 97] {
            let f = Field::new(p).unwrap();
            let a = f.from_u64(123_456_789);
            let b = f.from_u64(987_654_321);
            assert_eq!(f.to_u64(f.mul(a, b)), mul_mod(123_456_789 % p, 987_654_321 % p, p));
            assert_eq!(f.mul(a, f.inv(a)), f.one());
            assert_eq!(f.add(f.sub(a, b), b), a);
        }
    }

    #[test]
    fn interpolation_paths_agree() {
        let f = Field::new(DEFAULT_PRIME).unwrap();
        let coeffs: Vec<u64> = [0, 0, 5, 0, 7, 1, 0, 0].iter().map(|&c| f.from_u64(c)).collect();
        let root = f.root_of_unity(8).unwrap();
        let eval = |x: u64| coeffs.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c));
        let ys: Vec<u64> = (0..8).map(|j| eval(f.pow(root, j))).collect();
        assert_eq!(f.interpolate_roots(&ys, root), coeffs);
        let xs: Vec<u64> = (1..=8).map(|x| f.from_u64(x)).collect();
        let ys2: Vec<u64> = xs.iter().map(|&x| eval(x)).collect();
        assert_eq!(f.interpolate(&xs, &ys2), coeffs);
    }
}
