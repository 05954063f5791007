//! Randomized oracle from the Tutte matrix with monomial entries.
//!
//! Entry `(u, v)` of `T(x)` is `b_e x^{w_e}` summed over parallel edges, with
//! `b_e` random. The Pfaffian of `T(x)` is a polynomial whose lowest nonzero
//! term sits at the minimum perfect-matching weight unless the random values
//! cancel it, which happens with probability at most `n / p`. Weights are
//! first reduced by a feasible vertex potential to keep the degree small, and
//! the polynomial is recovered from its values at roots of unity.
//!
//! Pair deletions reuse one inverse per evaluation point:
//! `Pf(T - u - v) = ±Pf(T) * (T^-1)_{uv}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::field::{Field, DEFAULT_PRIME};
use super::{MwpmOracle, Query};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TutteOracle {
    field: Field,
    seed: u64,
    retrials: usize,
}

impl TutteOracle {
    pub fn new(prime: u64, seed: u64, retrials: usize) -> Result<Self> {
        if prime < (1 << 30) {
            return Err(Error::Oracle(format!("field prime {prime} is below 2^30")));
        }
        Ok(TutteOracle {
            field: Field::new(prime)?,
            seed,
            retrials: retrials.max(1),
        })
    }

    pub fn with_seed(seed: u64) -> Self {
        Self::new(DEFAULT_PRIME, seed, 3).expect("default prime is valid")
    }
}

/// Reduced weights and the potential that produced them.
struct Reduced {
    potential: Vec<i64>,
    edges: Vec<(usize, usize, u64)>,
    degree: u64,
}

fn reduce_weights(q: &Query) -> Reduced {
    let n = q.vertex_count();
    let mut lo = vec![i64::MAX; n];
    for &(u, v, w) in q.edges() {
        lo[u] = lo[u].min(w);
        lo[v] = lo[v].min(w);
    }
    let mut potential: Vec<i64> = lo
        .iter()
        .map(|&m| if m == i64::MAX { 0 } else { m.div_euclid(2) })
        .collect();
    // raise each potential as far as its edges allow
    let mut inc: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for &(u, v, w) in q.edges() {
        inc[u].push((v, w));
        inc[v].push((u, w));
    }
    for x in 0..n {
        if let Some(slack) = inc[x].iter().map(|&(y, w)| w - potential[x] - potential[y]).min() {
            potential[x] += slack;
        }
    }
    let edges: Vec<(usize, usize, u64)> = q
        .edges()
        .iter()
        .map(|&(u, v, w)| (u, v, (w - potential[u] - potential[v]) as u64))
        .collect();
    let mut hi = vec![0u64; n];
    for &(u, v, r) in &edges {
        hi[u] = hi[u].max(r);
        hi[v] = hi[v].max(r);
    }
    Reduced {
        potential,
        edges,
        degree: hi.iter().sum::<u64>() / 2,
    }
}

/// Pfaffian of a skew-symmetric matrix, destroying it.
fn pfaffian(f: &Field, a: &mut [u64], n: usize) -> u64 {
    if n % 2 == 1 {
        return 0;
    }
    let mut pf = f.one();
    let mut tau = vec![0u64; n];
    for k in (0..n).step_by(2) {
        let Some(kp) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
            return 0;
        };
        if kp != k + 1 {
            for c in 0..n {
                a.swap((k + 1) * n + c, kp * n + c);
            }
            for r in 0..n {
                a.swap(r * n + k + 1, r * n + kp);
            }
            pf = f.neg(pf);
        }
        let pivot = a[k * n + k + 1];
        pf = f.mul(pf, pivot);
        if k + 2 < n {
            let inv = f.inv(pivot);
            for i in k + 2..n {
                tau[i] = f.mul(a[k * n + i], inv);
            }
            for i in k + 2..n {
                let ci = a[i * n + k + 1];
                for j in k + 2..n {
                    let plus = f.mul(tau[i], a[j * n + k + 1]);
                    let minus = f.mul(ci, tau[j]);
                    a[i * n + j] = f.add(a[i * n + j], f.sub(plus, minus));
                }
            }
        }
    }
    pf
}

/// Inverse by Gauss-Jordan elimination, `None` when singular.
fn inverse(f: &Field, a: &[u64], n: usize) -> Option<Vec<u64>> {
    let mut m = a.to_vec();
    let mut inv = vec![0u64; n * n];
    for i in 0..n {
        inv[i * n + i] = f.one();
    }
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r * n + col] != 0)?;
        if piv != col {
            for c in 0..n {
                m.swap(piv * n + c, col * n + c);
                inv.swap(piv * n + c, col * n + c);
            }
        }
        let s = f.inv(m[col * n + col]);
        for c in 0..n {
            m[col * n + c] = f.mul(m[col * n + c], s);
            inv[col * n + c] = f.mul(inv[col * n + c], s);
        }
        for r in 0..n {
            let factor = m[r * n + col];
            if r == col || factor == 0 {
                continue;
            }
            for c in 0..n {
                m[r * n + c] = f.sub(m[r * n + c], f.mul(factor, m[col * n + c]));
                inv[r * n + c] = f.sub(inv[r * n + c], f.mul(factor, inv[col * n + c]));
            }
        }
    }
    Some(inv)
}

fn without(a: &[u64], n: usize, u: usize, v: usize) -> Vec<u64> {
    let keep: Vec<usize> = (0..n).filter(|&x| x != u && x != v).collect();
    let mut out = Vec::with_capacity(keep.len() * keep.len());
    for &r in &keep {
        for &c in &keep {
            out.push(a[r * n + c]);
        }
    }
    out
}

/// Evaluation points and the way to read coefficients back off them.
enum Points {
    Roots { root: u64, powers: Vec<u64> },
    Plain { xs: Vec<u64> },
}

impl Points {
    fn new(f: &Field, degree: u64) -> Result<Self> {
        let count = (degree + 1).next_power_of_two() as usize;
        if let Some(root) = f.root_of_unity(count) {
            let mut powers = Vec::with_capacity(count);
            let mut x = f.one();
            for _ in 0..count {
                powers.push(x);
                x = f.mul(x, root);
            }
            return Ok(Points::Roots { root, powers });
        }
        if degree + 1 >= f.prime() {
            return Err(Error::Oracle(format!(
                "field of size {} too small for degree {degree}",
                f.prime()
            )));
        }
        Ok(Points::Plain {
            xs: (1..=degree + 1).map(|x| f.from_u64(x)).collect(),
        })
    }

    fn len(&self) -> usize {
        match self {
            Points::Roots { powers, .. } => powers.len(),
            Points::Plain { xs } => xs.len(),
        }
    }

    /// `x_j ^ e` for every monomial exponent in `exps`.
    fn monomials(&self, f: &Field, j: usize, exps: &[u64]) -> Vec<u64> {
        match self {
            Points::Roots { powers, .. } => {
                let n = powers.len() as u64;
                exps.iter().map(|&e| powers[((j as u64 * (e % n)) % n) as usize]).collect()
            }
            Points::Plain { xs } => exps.iter().map(|&e| f.pow(xs[j], e)).collect(),
        }
    }

    fn lowest_term(&self, f: &Field, ys: &[u64]) -> Option<u64> {
        if ys.iter().all(|&y| y == 0) {
            return None;
        }
        let coeffs = match self {
            Points::Roots { root, .. } => f.interpolate_roots(ys, *root),
            Points::Plain { xs } => f.interpolate(xs, ys),
        };
        coeffs.iter().position(|&c| c != 0).map(|i| i as u64)
    }
}

impl TutteOracle {
    fn randomness(&self, key: &[u8; 32], trial: usize, count: usize) -> Vec<u64> {
        let mut h = Sha256::new();
        h.update(self.seed.to_le_bytes());
        h.update(key);
        h.update((trial as u64).to_le_bytes());
        let mut seed = [0u8; 32];
        seed.copy_from_slice(&h.finalize());
        let mut rng = ChaCha8Rng::from_seed(seed);
        let p = self.field.prime();
        (0..count).map(|_| self.field.from_u64(rng.gen_range(1..p))).collect()
    }

    fn matrix(&self, n: usize, edges: &[(usize, usize, u64)], b: &[u64], mono: &[u64]) -> Vec<u64> {
        let f = &self.field;
        let mut a = vec![0u64; n * n];
        for (i, &(u, v, _)) in edges.iter().enumerate() {
            let x = f.mul(b[i], mono[i]);
            a[u * n + v] = f.add(a[u * n + v], x);
            a[v * n + u] = f.sub(a[v * n + u], x);
        }
        a
    }

    /// Lowest-term exponents per trial for the query itself (`pairs` empty)
    /// or for each pair deletion.
    #[allow(clippy::needless_range_loop)] // `j` indexes columns of a 2-D table
    fn run(&self, q: &Query, pairs: &[(usize, usize)]) -> Result<Vec<Option<i64>>> {
        let f = &self.field;
        let n = q.vertex_count();
        let red = reduce_weights(q);
        let points = Points::new(f, red.degree)?;
        let exps: Vec<u64> = red.edges.iter().map(|e| e.2).collect();
        let key = q.key();
        let base: i64 = red.potential.iter().sum();
        let offset = |u: usize, v: usize| base - red.potential[u] - red.potential[v];
        let outputs = pairs.len().max(1);
        let mut best: Vec<Option<i64>> = vec![None; outputs];
        for trial in 0..self.retrials {
            let b = self.randomness(&key, trial, red.edges.len());
            let mut values = vec![vec![0u64; points.len()]; outputs];
            for j in 0..points.len() {
                let mono = points.monomials(f, j, &exps);
                let a = self.matrix(n, &red.edges, &b, &mono);
                let pf = pfaffian(f, &mut a.clone(), n);
                if pairs.is_empty() {
                    values[0][j] = pf;
                    continue;
                }
                match (pf != 0).then(|| inverse(f, &a, n)).flatten() {
                    Some(inv) => {
                        for (slot, &(u, v)) in pairs.iter().enumerate() {
                            values[slot][j] = f.mul(pf, inv[u * n + v]);
                        }
                    }
                    None => {
                        for (slot, &(u, v)) in pairs.iter().enumerate() {
                            values[slot][j] = pfaffian(f, &mut without(&a, n, u, v), n - 2);
                        }
                    }
                }
            }
            for slot in 0..outputs {
                let found = points.lowest_term(f, &values[slot]).map(|k| {
                    let shift = if pairs.is_empty() { base } else { offset(pairs[slot].0, pairs[slot].1) };
                    k as i64 + shift
                });
                if let Some(x) = found {
                    best[slot] = Some(best[slot].map_or(x, |y: i64| y.min(x)));
                }
            }
        }
        Ok(best)
    }
}

impl MwpmOracle for TutteOracle {
    fn name(&self) -> &'static str {
        "tutte"
    }

    fn mwpm_weight(&self, q: &Query) -> Result<Option<i64>> {
        let n = q.vertex_count();
        if n == 0 {
            return Ok(Some(0));
        }
        if n % 2 == 1 {
            return Ok(None);
        }
        Ok(self.run(q, &[])?[0])
    }

    fn pair_deletions(&self, q: &Query, pairs: &[(usize, usize)]) -> Result<Vec<Option<i64>>> {
        let n = q.vertex_count();
        if pairs.is_empty() {
            return Ok(Vec::new());
        }
        if n % 2 == 1 {
            return Ok(vec![None; pairs.len()]);
        }
        if n == 2 {
            return Ok(vec![Some(0); pairs.len()]);
        }
        self.run(q, pairs)
    }
}
