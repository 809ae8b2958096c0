//! Factorization of squarefree integer polynomials over Q.
//!
//! Zassenhaus: factor modulo a suitable small prime (distinct-degree then
//! Cantor–Zassenhaus equal-degree splitting), Hensel-lift the factorization
//! to a modulus above the Mignotte bound, then recombine subsets of modular
//! factors by trial division over Z.

use super::poly::IntPoly;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// How many usable primes are tried before settling on the one giving the
/// fewest modular factors.
const PRIME_TRIALS: usize = 5;

/// Irreducible factors over Q of a squarefree polynomial, each primitive
/// with positive leading coefficient. Constant input yields no factors.
pub fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let f = f.primitive();
    if f.degree() == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut f = f;
    if f.coeffs()[0].is_zero() {
        out.push(IntPoly::from_i64(&[0, 1]));
        f = IntPoly::new(f.coeffs()[1..].to_vec());
    }
    if f.degree() == 1 {
        out.push(f);
    } else if f.degree() > 1 {
        out.extend(zassenhaus(&f));
    }
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    out
}

/// Irreducible factors of an arbitrary nonzero polynomial, multiplicities dropped.
pub fn irreducible_factors(f: &IntPoly) -> Vec<IntPoly> {
    factor_squarefree(&f.squarefree_part())
}

fn zassenhaus(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.degree();
    let lc = f.lc();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);

    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    let mut p = 10u64;
    while tried < PRIME_TRIALS {
        p = next_prime(p);
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce(f, p);
        let g = gcd(&fp, &derivative(&fp, p), p);
        if g.len() > 1 {
            continue;
        }
        tried += 1;
        let facs = factor_mod_p(&monic(&fp, p), p, &mut rng);
        if facs.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
    }
    let (p, facs) = best.expect("at least one prime tried");

    // Coefficient bound for any factor times the leading coefficient.
    let norm1: BigInt = f.coeffs().iter().map(|c| c.abs()).sum();
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * norm1;
    let mut modulus = BigInt::from(p);
    let mut steps = 0;
    while modulus <= bound {
        modulus = &modulus * &modulus;
        steps += 1;
    }

    let lifted = multifactor_lift(f, &facs, p, steps);
    recombine(f, lifted, &modulus)
}

fn recombine(f: &IntPoly, mut factors: Vec<Vec<BigInt>>, m: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut size = 1;
    while 2 * size <= factors.len() {
        let mut found = false;
        for subset in Combinations::new(factors.len(), size) {
            let lc = f.lc();
            let mut prod = vec![lc.clone()];
            for &i in &subset {
                prod = mulmod_big(&prod, &factors[i], m);
            }
            let cand = IntPoly::new(prod.into_iter().map(|c| symmetric(c, m)).collect()).primitive();
            if let Some(q) = f.div_exact(&cand) {
                out.push(cand);
                f = q.primitive();
                for &i in subset.iter().rev() {
                    factors.remove(i);
                }
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f.degree() > 0 {
        out.push(f);
    }
    out
}

/// Lexicographic k-subsets of {0..n}.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Self { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let cur = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(cur)
    }
}

fn next_prime(mut n: u64) -> u64 {
    loop {
        n += 1;
        if n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0) {
            return n;
        }
    }
}

// ---- arithmetic in F_p[x]; coefficient vectors lowest degree first, trimmed ----

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn reduce(f: &IntPoly, p: u64) -> Vec<u64> {
    let bp = BigInt::from(p);
    trim(f.coeffs().iter().map(|c| c.mod_floor(&bp).to_u64().unwrap()).collect())
}

fn pow_u64(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    pow_u64(a, p - 2, p)
}

fn monic(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let li = inv(l, p);
            a.iter().map(|c| c * li % p).collect()
        }
    }
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + p - b.get(i).unwrap_or(&0)) % p).collect())
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty());
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let li = inv(*b.last().unwrap(), p);
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * li % p;
        q[k] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * bj % p) % p;
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    divrem(a, b, p).1
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// Returns `(s, t)` with `s*a + t*b = 1` for coprime `a`, `b`.
fn ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    assert_eq!(r0.len(), 1, "ext_gcd on non-coprime polynomials");
    let li = inv(r0[0], p);
    let scale = |v: Vec<u64>| trim(v.into_iter().map(|c| c * li % p).collect());
    (scale(s0), scale(t0))
}

fn derivative(a: &[u64], p: u64) -> Vec<u64> {
    trim(a.iter().enumerate().skip(1).map(|(k, &c)| (k as u64 % p) * c % p).collect())
}

fn powmod(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let b = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        r = rem(&mul(&r, &r, p), m, p);
        if e.bit(i) {
            r = rem(&mul(&r, &b, p), m, p);
        }
    }
    r
}

/// Monic irreducible factors of a monic squarefree polynomial over F_p.
fn factor_mod_p(f: &[u64], p: u64, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let x = vec![0u64, 1];
    let mut f = f.to_vec();
    let mut h = x.clone();
    let mut i = 1;
    let bp = BigUint::from(p);
    while f.len() - 1 >= 2 * i {
        h = powmod(&h, &bp, &f, p);
        let g = gcd(&sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            equal_degree_split(&g, i, p, rng, &mut out);
            f = divrem(&f, &g, p).0;
            h = rem(&h, &f, p);
        }
        i += 1;
    }
    if f.len() > 1 {
        out.push(monic(&f, p));
    }
    out
}

fn equal_degree_split(g: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Vec<u64>>) {
    let n = g.len() - 1;
    if n == d {
        out.push(monic(g, p));
        return;
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = trim((0..n).map(|_| rng.random_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = sub(&powmod(&a, &e, g, p), &[1], p);
        let h = gcd(&b, g, p);
        if h.len() > 1 && h.len() < g.len() {
            let other = divrem(g, &h, p).0;
            equal_degree_split(&h, d, p, rng, out);
            equal_degree_split(&other, d, p, rng, out);
            return;
        }
    }
}

// ---- arithmetic in (Z/mZ)[x], nonnegative representatives ----

fn modb(v: Vec<BigInt>, m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = v.into_iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn addmod_big(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    modb((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect(), m)
}

fn submod_big(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    modb((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect(), m)
}

fn mulmod_big(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    modb(out, m)
}

/// Division by a monic polynomial modulo m.
fn divrem_monic_big(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    debug_assert!(b.last().is_some_and(|c| c.is_one()));
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].mod_floor(m);
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    (modb(q, m), modb(r, m))
}

fn symmetric(c: BigInt, m: &BigInt) -> BigInt {
    let c = c.mod_floor(m);
    if &c * 2 > *m {
        c - m
    } else {
        c
    }
}

fn to_big(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn modinv_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Lifts `f ≡ lc(f) * prod(facs) (mod p)` to monic factors modulo `p^(2^steps)`.
fn multifactor_lift(f: &IntPoly, facs: &[Vec<u64>], p: u64, steps: usize) -> Vec<Vec<BigInt>> {
    let mut m = BigInt::from(p);
    for _ in 0..steps {
        m = &m * &m;
    }
    let fm = modb(f.coeffs().to_vec(), &m);
    let mut out = Vec::new();
    lift_node(&fm, facs, p, steps, &m, &mut out);
    out
}

fn lift_node(f: &[BigInt], facs: &[Vec<u64>], p: u64, steps: usize, m: &BigInt, out: &mut Vec<Vec<BigInt>>) {
    if facs.len() == 1 {
        let li = modinv_big(f.last().unwrap(), m);
        out.push(modb(f.iter().map(|c| c * &li).collect(), m));
        return;
    }
    let (left, right) = facs.split_at(facs.len() / 2);
    let bp = BigInt::from(p);
    let lc_p = f.last().unwrap().mod_floor(&bp).to_u64().unwrap();
    let mut g0 = vec![lc_p];
    for q in left {
        g0 = mul(&g0, q, p);
    }
    let mut h0 = vec![1u64];
    for q in right {
        h0 = mul(&h0, q, p);
    }
    let (s0, t0) = ext_gcd(&g0, &h0, p);
    let (mut g, mut h, mut s, mut t) = (to_big(&g0), to_big(&h0), to_big(&s0), to_big(&t0));
    let mut cur = bp;
    for _ in 0..steps {
        cur = &cur * &cur;
        (g, h, s, t) = hensel_step(f, &g, &h, &s, &t, &cur);
    }
    // Keep g's leading coefficient equal to f's modulo m.
    g = modb(g, m);
    h = modb(h, m);
    lift_node(&g, left, p, steps, m, out);
    lift_node(&h, right, p, steps, m, out);
}

/// One quadratic Hensel step: given `f ≡ g h (mod m)` and `s g + t h ≡ 1 (mod m)`
/// with `h` monic, returns the same relations modulo `m2 = m^2`.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m2: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let e = submod_big(&modb(f.to_vec(), m2), &mulmod_big(g, h, m2), m2);
    let (q, r) = divrem_monic_big(&mulmod_big(s, &e, m2), h, m2);
    let g2 = addmod_big(&addmod_big(g, &mulmod_big(t, &e, m2), m2), &mulmod_big(&q, g, m2), m2);
    let h2 = addmod_big(h, &r, m2);
    let b = submod_big(
        &addmod_big(&mulmod_big(s, &g2, m2), &mulmod_big(t, &h2, m2), m2),
        &[BigInt::one()],
        m2,
    );
    let (c, d) = divrem_monic_big(&mulmod_big(s, &b, m2), &h2, m2);
    let s2 = submod_big(s, &d, m2);
    let t2 = submod_big(&submod_big(t, &mulmod_big(t, &b, m2), m2), &mulmod_big(&c, &g2, m2), m2);
    (g2, h2, s2, t2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(fs: &[IntPoly]) -> IntPoly {
        fs.iter().fold(IntPoly::from_i64(&[1]), |a, b| a.mul(b))
    }

    /// Brute-force irreducibility oracle for small degree: no monic-up-to-content
    /// factor of degree ≤ n/2 exists with coefficients in a bounded box, checked by
    /// rational-root search (degree 1) and exact division for degree 2 candidates.
    fn has_small_factor(f: &IntPoly, box_bound: i64) -> bool {
        let n = f.degree();
        for a in 1..=box_bound {
            for b in -box_bound..=box_bound {
                let lin = IntPoly::from_i64(&[b, a]);
                if n > 1 && f.div_exact(&lin).is_some() {
                    return true;
                }
                if n >= 4 {
                    for c in -box_bound..=box_bound {
                        let quad = IntPoly::from_i64(&[c, b, a]);
                        if f.div_exact(&quad).is_some() {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn factors_products_of_known_irreducibles() {
        let parts = vec![
            IntPoly::from_i64(&[-2, 0, 1]),
            IntPoly::from_i64(&[-3, 0, 1]),
            IntPoly::from_i64(&[1, 1, 1]),
            IntPoly::from_i64(&[-5, 3]),
        ];
        let f = product(&parts);
        let got = factor_squarefree(&f);
        assert_eq!(got.len(), 4);
        assert_eq!(product(&got), f);
    }

    #[test]
    fn swinnerton_dyer_style_quartic_is_irreducible() {
        // minimal polynomial of √2 + √3 splits modulo every prime
        let f = IntPoly::from_i64(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_squarefree(&f), vec![f.clone()]);
        assert!(!has_small_factor(&f, 12));
    }

    #[test]
    fn non_monic_and_zero_root() {
        // x (6x^2 - x - 1) (4x^2 + 1) = x (3x+1)(2x-1)(4x^2+1)
        let f = IntPoly::from_i64(&[0, 1])
            .mul(&IntPoly::from_i64(&[-1, -1, 6]))
            .mul(&IntPoly::from_i64(&[1, 0, 4]));
        let got = factor_squarefree(&f);
        assert_eq!(got.len(), 4);
        assert_eq!(product(&got), f);
        for g in &got {
            assert!(!has_small_factor(g, 6));
        }
    }

    #[test]
    fn cyclotomic_product() {
        // x^12 - 1 = prod of cyclotomic polynomials for divisors of 12
        let mut c = vec![0i64; 13];
        c[0] = -1;
        c[12] = 1;
        let f = IntPoly::from_i64(&c);
        let got = factor_squarefree(&f);
        assert_eq!(got.len(), 6);
        assert_eq!(product(&got), f);
    }
}
