//! Exact arithmetic in Z[eps_m] for prime m, the Galois action, and p-adic
//! valuations at the primes above p.
//!
//! Elements live on the basis 1, eps, ..., eps^{m-2} with the reduction
//! eps^{m-1} = -(1 + eps + ... + eps^{m-2}). Valuations are computed by
//! reducing against Hensel-lifted factors of x^m - 1 over Z/p^N; the paper
//! works with ideals abstractly, so the algorithmic side is ours.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{self, FieldSpec, FqElem, MuTable};

/// Element of Z[eps_m], m prime; coeffs has length m-1, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycloInt {
    pub m: u64,
    pub coeffs: Vec<i128>,
}

impl CycloInt {
    pub fn zero(m: u64) -> CycloInt {
        CycloInt { m, coeffs: vec![0; (m - 1) as usize] }
    }

    pub fn from_int(m: u64, n: i128) -> CycloInt {
        let mut c = Self::zero(m);
        c.coeffs[0] = n;
        c
    }

    pub fn one(m: u64) -> CycloInt {
        Self::from_int(m, 1)
    }

    /// eps_m^k, k taken mod m.
    pub fn eps_pow(m: u64, k: u64) -> CycloInt {
        let mut v = vec![0i128; m as usize];
        v[(k % m) as usize] = 1;
        Self::from_exponents(m, v)
    }

    /// Fold a coefficient vector indexed by exponents 0..m-1 onto the basis
    /// 1..eps^{m-2} using eps^{m-1} = -(1 + ... + eps^{m-2}).
    pub fn from_exponents(m: u64, v: Vec<i128>) -> CycloInt {
        debug_assert_eq!(v.len(), m as usize);
        let top = v[(m - 1) as usize];
        let coeffs = v[..(m - 1) as usize].iter().map(|&c| c - top).collect();
        CycloInt { m, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &CycloInt) -> Result<CycloInt> {
        if self.m != other.m {
            return Err(Error::ModulusMismatch);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycloInt { m: self.m, coeffs })
    }

    pub fn sub(&self, other: &CycloInt) -> Result<CycloInt> {
        if self.m != other.m {
            return Err(Error::ModulusMismatch);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycloInt { m: self.m, coeffs })
    }

    pub fn neg(&self) -> CycloInt {
        CycloInt { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, s: i128) -> CycloInt {
        CycloInt { m: self.m, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn mul(&self, other: &CycloInt) -> Result<CycloInt> {
        if self.m != other.m {
            return Err(Error::ModulusMismatch);
        }
        let m = self.m as usize;
        let mut acc = vec![0i128; self.m as usize];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[(i + j) % m] += a * b;
            }
        }
        Ok(Self::from_exponents(self.m, acc))
    }

    /// Galois automorphism sigma_t: eps -> eps^t, gcd(t, m) = 1.
    pub fn galois(&self, t: u64) -> Result<CycloInt> {
        let t = t % self.m;
        if t == 0 || num_integer::gcd(t, self.m) != 1 {
            return Err(Error::NonUnit { t, m: self.m });
        }
        let m = self.m as usize;
        let mut acc = vec![0i128; m];
        for (j, &c) in self.coeffs.iter().enumerate() {
            acc[(j * t as usize) % m] += c;
        }
        Ok(Self::from_exponents(self.m, acc))
    }

    /// Complex conjugation sigma_{-1}.
    pub fn conj(&self) -> CycloInt {
        self.galois(self.m - 1).expect("m - 1 is a unit mod m")
    }

    /// a * conj(a) when it is a rational integer; None otherwise (which is
    /// legitimate for general a).
    pub fn abs_square(&self) -> Option<i128> {
        let prod = self.mul(&self.conj()).expect("same m");
        if prod.coeffs[1..].iter().all(|&c| c == 0) {
            Some(prod.coeffs[0])
        } else {
            None
        }
    }

    /// Reduce at eps -> zeta inside F_q (the mod-p avatar of the element).
    pub fn reduce_mod_prime(&self, field: &FieldSpec, mu: &MuTable) -> FqElem {
        debug_assert_eq!(self.m, mu.m);
        let mut acc = field.zero();
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let s = c.rem_euclid(field.p as i128) as u64;
            acc = field.add(&acc, &field.mul_scalar(&mu.elems[j % mu.m as usize], s));
        }
        acc
    }
}

/// Checked spec entry point for ring arithmetic.
pub fn cyclo_arith(a: &CycloInt, b: &CycloInt, op: &str) -> Result<CycloInt> {
    match op {
        "add" => a.add(b),
        "sub" => a.sub(b),
        "mul" => a.mul(b),
        other => Err(Error::WrongShape(format!("unknown cyclotomic op {other}"))),
    }
}

// ---- factorization of p in Z[eps_m] ----

/// The splitting data of p in Z[eps_m]: b = (m-1)/h Hensel-lifted factors of
/// (x^m - 1)/(x - 1) over Z/p^N, each of degree h = ord_m(p).
#[derive(Debug, Clone)]
pub struct PrimeFactorization {
    pub p: u64,
    pub m: u64,
    pub h: usize,
    pub b: usize,
    pub precision: u32,
    pub p_pow: BigUint,
    /// monic degree-h factors, coefficients in [0, p^N), constant first
    pub factors: Vec<Vec<BigUint>>,
}

fn big_poly_trim(v: &mut Vec<BigUint>) {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
}

fn big_poly_mul_mod(a: &[BigUint], b: &[BigUint], md: &BigUint) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (&out[i + j] + x * y) % md;
        }
    }
    big_poly_trim(&mut out);
    out
}

/// Remainder modulo a monic polynomial, coefficients mod md.
fn big_poly_rem_monic(a: &[BigUint], g: &[BigUint], md: &BigUint) -> Vec<BigUint> {
    let mut r = a.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r.last().unwrap().clone();
        let shift = r.len() - 1 - dg;
        if !lead.is_zero() {
            for i in 0..=dg {
                let t = (&lead * &g[i]) % md;
                let cur = &r[shift + i];
                r[shift + i] = ((cur + md) - t) % md;
            }
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(BigUint::zero());
    }
    big_poly_trim(&mut r);
    r
}

/// Multiplicative order of p mod m.
pub fn order_mod(p: u64, m: u64) -> usize {
    let mut x = p % m;
    let mut k = 1usize;
    while x != 1 {
        x = (x * (p % m)) % m;
        k += 1;
    }
    k
}

/// Factor p in Z[eps_m]: the degree-h irreducible factors of x^m - 1 over
/// F_p (minus x - 1), Hensel-lifted to Z/p^N. Factor order is lexicographic
/// on the mod-p coefficient vectors.
pub fn factor_p(m: u64, p: u64, precision: u32) -> Result<PrimeFactorization> {
    if p == m {
        return Err(Error::RamifiedPrime(p));
    }
    if !ff::is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if !ff::is_prime(m) {
        return Err(Error::NonPrime(m));
    }
    let n = precision.max(1);
    let h = order_mod(p, m);
    let b = (m as usize - 1) / h;

    // factors mod p, as minimal polynomials of the m-th roots of unity in
    // F_{p^h}, one per Frobenius orbit on (Z/m) \ {0}
    let field = FieldSpec::new(p, h)?;
    let mu = MuTable::new(&field, m)?;
    let mut seen = vec![false; m as usize];
    seen[0] = true; // the factor x - 1 is handled separately
    let mut mod_p_factors: Vec<Vec<u64>> = Vec::new();
    for j in 1..m {
        if seen[j as usize] {
            continue;
        }
        // orbit of j under multiplication by p
        let mut orbit = Vec::new();
        let mut e = j;
        loop {
            orbit.push(e);
            seen[e as usize] = true;
            e = (e * (p % m)) % m;
            if e == j {
                break;
            }
        }
        // product of (x - zeta^e) over the orbit, computed in F_{p^h}
        let mut poly = vec![field.one()];
        for &e in &orbit {
            let root = &mu.elems[e as usize];
            let mut next = vec![field.zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = field.add(&next[i + 1], c);
                next[i] = field.sub(&next[i], &field.mul(c, root));
            }
            poly = next;
        }
        let coeffs: Vec<u64> = poly
            .iter()
            .map(|c| {
                debug_assert!(c.coeffs[1..].iter().all(|&x| x == 0), "factor not over F_p");
                c.coeffs[0]
            })
            .collect();
        mod_p_factors.push(coeffs);
    }
    debug_assert_eq!(mod_p_factors.len(), b);
    mod_p_factors.sort();

    // Hensel lift [x - 1, g_1, ..., g_b] from mod p to mod p^N, linearly
    let mut all: Vec<Vec<u64>> = Vec::with_capacity(b + 1);
    all.push(vec![(p - 1) % p, 1]); // x - 1
    all.extend(mod_p_factors.iter().cloned());

    // Bezout data: inverse of prod_{j != i} g_j modulo (g_i, p)
    let mut cofactor_inv: Vec<Vec<u64>> = Vec::with_capacity(all.len());
    for i in 0..all.len() {
        let mut hprod = vec![1u64];
        for (j, gj) in all.iter().enumerate() {
            if j != i {
                hprod = ff::fp_poly_mul(&hprod, gj, p);
            }
        }
        let inv = ff::fp_poly_inv_mod(&hprod, &all[i], p)
            .expect("factors of a squarefree polynomial are pairwise coprime");
        cofactor_inv.push(inv);
    }

    let big_p = BigUint::from(p);
    let mut lifted: Vec<Vec<BigUint>> = all
        .iter()
        .map(|g| g.iter().map(|&c| BigUint::from(c)).collect())
        .collect();
    let mut pk = big_p.clone(); // current modulus p^k
    for _ in 1..n {
        let pk1 = &pk * &big_p;
        // f = x^m - 1 mod p^{k+1}
        let mut f = vec![BigUint::zero(); m as usize + 1];
        f[0] = &pk1 - BigUint::one();
        f[m as usize] = BigUint::one();
        // G = product of current factors mod p^{k+1}
        let mut g_all = vec![BigUint::one()];
        for g in &lifted {
            g_all = big_poly_mul_mod(&g_all, g, &pk1);
        }
        // e = (f - G)/p^k mod p
        let deg = f.len().max(g_all.len());
        let mut e = vec![0u64; deg];
        for i in 0..deg {
            let fi = f.get(i).cloned().unwrap_or_else(BigUint::zero);
            let gi = g_all.get(i).cloned().unwrap_or_else(BigUint::zero);
            let diff = ((&fi + &pk1) - gi) % &pk1;
            debug_assert!((&diff % &pk).is_zero(), "lift invariant broken");
            let quo = &diff / &pk;
            e[i] = (quo % &big_p).try_into().unwrap_or(0u64);
        }
        let mut e_vec = e;
        ff::fp_poly_trim(&mut e_vec);
        // per-factor correction delta_i = e * H_i^{-1} mod (g_i, p)
        for (i, g) in lifted.iter_mut().enumerate() {
            let gi_mod_p: Vec<u64> = g
                .iter()
                .map(|c| (c % &big_p).try_into().unwrap_or(0u64))
                .collect();
            let prod = ff::fp_poly_mul(&e_vec, &cofactor_inv[i], p);
            let delta = ff::fp_poly_rem(&prod, &gi_mod_p, p);
            for (idx, &dc) in delta.iter().enumerate() {
                if dc != 0 {
                    g[idx] = (&g[idx] + &pk * BigUint::from(dc)) % &pk1;
                }
            }
        }
        pk = pk1;
    }

    // drop the x - 1 factor; keep the b primes above p
    let factors = lifted[1..].to_vec();
    Ok(PrimeFactorization { p, m, h, b, precision: n, p_pow: pk, factors })
}

impl PrimeFactorization {
    /// v_{p_i}(a): reduce a(eps) against the i-th lifted factor and take the
    /// minimal p-adic valuation of the residue coefficients.
    pub fn valuation(&self, a: &CycloInt, i: usize) -> Result<u32> {
        if a.m != self.m {
            return Err(Error::ModulusMismatch);
        }
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let md = &self.p_pow;
        let big_md = num_bigint::BigInt::from_biguint(num_bigint::Sign::Plus, md.clone());
        let poly: Vec<BigUint> = a
            .coeffs
            .iter()
            .map(|&c| {
                let mut r = num_bigint::BigInt::from(c) % &big_md;
                if r.sign() == num_bigint::Sign::Minus {
                    r += &big_md;
                }
                r.to_biguint().unwrap()
            })
            .collect();
        let r = big_poly_rem_monic(&poly, &self.factors[i], md);
        let big_p = BigUint::from(self.p);
        let mut best: Option<u32> = None;
        for c in &r {
            if c.is_zero() {
                continue;
            }
            let mut v = 0u32;
            let mut c = c.clone();
            while (&c % &big_p).is_zero() {
                c /= &big_p;
                v += 1;
            }
            best = Some(best.map_or(v, |b| b.min(v)));
        }
        match best {
            Some(v) if v < self.precision => Ok(v),
            _ => Err(Error::PrecisionExhausted(self.precision)),
        }
    }

    /// Index of the prime cut out by eps -> zeta for the given mu_m table:
    /// the factor vanishing at zeta.
    pub fn distinguished_index(&self, field: &FieldSpec, mu: &MuTable) -> usize {
        let big_p = BigUint::from(self.p);
        for (i, g) in self.factors.iter().enumerate() {
            let mut acc = field.zero();
            for c in g.iter().rev() {
                let scalar: u64 = (c % &big_p).try_into().unwrap_or(0);
                acc = field.mul(&acc, &mu.zeta);
                acc.coeffs[0] = (acc.coeffs[0] + scalar) % field.p;
            }
            if field.is_zero(&acc) {
                return i;
            }
        }
        panic!("no factor vanishes at zeta; inconsistent factorization")
    }
}

/// Valuations of a at every prime above p, with automatic precision
/// escalation (start at 8 digits, double on exhaustion).
pub fn valuations_auto(a: &CycloInt, m: u64, p: u64) -> Result<Vec<u32>> {
    let mut n = 8u32;
    loop {
        let fact = factor_p(m, p, n)?;
        let mut out = Vec::with_capacity(fact.b);
        let mut retry = false;
        for i in 0..fact.b {
            match fact.valuation(a, i) {
                Ok(v) => out.push(v),
                Err(Error::PrecisionExhausted(_)) => {
                    retry = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if !retry {
            return Ok(out);
        }
        n *= 2;
        if n > 1024 {
            return Err(Error::PrecisionExhausted(n));
        }
    }
}
