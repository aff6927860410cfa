//! Exact arithmetic in F_p and F_{p^h}.
//!
//! A field is described by a [`FieldSpec`]; elements are coefficient vectors
//! on the power basis of the canonical modulus. The modulus is pinned to the
//! lexicographically least monic irreducible of its degree (constant term
//! first) so that independent runs agree on every derived object: element
//! ordering, primitive roots, and the embedding of mu_m used by characters.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mod_mul64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub(crate) fn mod_pow64(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul64(acc, b, n);
        }
        b = mod_mul64(b, b, n);
        e >>= 1;
    }
    acc
}

/// Prime factorization of a u64 by trial division (desk-scale inputs).
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d as u128 * d as u128 <= n as u128 {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

// ---- dense polynomial helpers over F_p (u64 coefficients) ----

pub(crate) fn fp_poly_trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

pub(crate) fn fp_poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_poly_trim(&mut out);
    out
}

/// Remainder of a modulo monic m.
pub(crate) fn fp_poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for i in 0..=dm {
                let t = (lead * m[i]) % p;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(0);
    }
    fp_poly_trim(&mut r);
    r
}

pub(crate) fn fp_poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_poly_trim(&mut a);
    fp_poly_trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        // make b monic before reducing
        let lead = *b.last().unwrap();
        if lead != 1 {
            let inv = mod_pow64(lead, p - 2, p);
            for c in b.iter_mut() {
                *c = (*c * inv) % p;
            }
        }
        let r = fp_poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Quotient and remainder of a by b over F_p; b need not be monic.
pub(crate) fn fp_poly_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut rem = a.to_vec();
    fp_poly_trim(&mut rem);
    let mut b = b.to_vec();
    fp_poly_trim(&mut b);
    let db = b.len() - 1;
    if rem.len() <= db {
        return (vec![0], rem);
    }
    let inv_lead = mod_pow64(*b.last().unwrap(), p - 2, p);
    let mut quo = vec![0u64; rem.len() - db];
    for shift in (0..=rem.len() - 1 - db).rev() {
        let c = (rem[shift + db] * inv_lead) % p;
        quo[shift] = c;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                let t = (c * bi) % p;
                rem[shift + i] = (rem[shift + i] + p - t) % p;
            }
        }
    }
    rem.truncate(db.max(1));
    fp_poly_trim(&mut rem);
    fp_poly_trim(&mut quo);
    (quo, rem)
}

/// Inverse of a modulo the monic polynomial g over F_p, if coprime.
pub(crate) fn fp_poly_inv_mod(a: &[u64], g: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = g.to_vec();
    let mut r1 = fp_poly_rem(a, g, p);
    let mut t0 = vec![0u64];
    let mut t1 = vec![1u64];
    while !(r1.len() == 1 && r1[0] == 0) {
        let (quo, rem) = fp_poly_divrem(&r0, &r1, p);
        let qt = fp_poly_mul(&quo, &t1, p);
        let n = t0.len().max(qt.len());
        let mut t2 = vec![0u64; n];
        for i in 0..n {
            let x = *t0.get(i).unwrap_or(&0);
            let y = *qt.get(i).unwrap_or(&0);
            t2[i] = (x + p - y) % p;
        }
        fp_poly_trim(&mut t2);
        r0 = r1;
        r1 = rem;
        t0 = t1;
        t1 = t2;
    }
    if r0.len() != 1 || r0[0] == 0 {
        return None; // not coprime
    }
    let inv_c = mod_pow64(r0[0], p - 2, p);
    let mut out: Vec<u64> = t0.iter().map(|&c| (c * inv_c) % p).collect();
    fp_poly_trim(&mut out);
    Some(fp_poly_rem(&out, g, p))
}

fn fp_poly_pow_mod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = fp_poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_poly_rem(&fp_poly_mul(&acc, &b, p), m, p);
        }
        b = fp_poly_rem(&fp_poly_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Irreducibility of a monic polynomial of degree h over F_p:
/// x^{p^h} = x mod f, and gcd(x^{p^{h/l}} - x, f) = 1 for prime l | h.
pub fn fp_poly_irreducible(f: &[u64], p: u64) -> bool {
    let h = f.len() - 1;
    if h == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let xq = fp_poly_pow_mod(&x, (p as u128).pow(h as u32), f, p);
    if xq != fp_poly_rem(&x, f, p) {
        return false;
    }
    for (l, _) in factor_u64(h as u64) {
        let e = (p as u128).pow((h as u64 / l) as u32);
        let mut g = fp_poly_pow_mod(&x, e, f, p);
        // g - x
        if g.len() < 2 {
            g.resize(2, 0);
        }
        g[1] = (g[1] + p - 1) % p;
        fp_poly_trim(&mut g);
        let d = fp_poly_gcd(f, &g, p);
        if d.len() > 1 {
            return false;
        }
    }
    true
}

/// A finite field F_{p^h} with its canonical defining modulus.
///
/// `modulus` is monic of degree h, coefficients constant-term first; for
/// h = 1 it is x itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub h: usize,
    pub modulus: Vec<u64>,
}

/// Element of F_{p^h}: h residues mod p on the power basis of the modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FqElem {
    pub coeffs: Vec<u64>,
}

/// Binary field operation selector for the checked entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{:?}", self.coeffs)
        }
    }
}

impl FieldSpec {
    /// Canonical field with q = p^h elements.
    pub fn new(p: u64, h: usize) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if h == 0 {
            return Err(Error::DegreeZero);
        }
        // guard: enumeration-scale fields only
        let mut q: u128 = 1;
        for _ in 0..h {
            q *= p as u128;
            if q >= (1u128 << 63) {
                return Err(Error::BudgetExceeded(q));
            }
        }
        let modulus = if h == 1 {
            vec![0, 1]
        } else {
            Self::least_irreducible(p, h)
        };
        Ok(FieldSpec { p, h, modulus })
    }

    /// Lexicographically least monic irreducible of degree h, constant first.
    fn least_irreducible(p: u64, h: usize) -> Vec<u64> {
        use std::collections::HashMap;
        use std::sync::{Mutex, OnceLock};
        static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Vec<u64>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(m) = cache.lock().unwrap().get(&(p, h)) {
            return m.clone();
        }
        let total = (p as u128).pow(h as u32);
        // constant term 0 means divisible by x; skip that whole lex block
        let mut idx: u128 = (p as u128).pow(h as u32 - 1);
        let found = loop {
            debug_assert!(idx < total, "no irreducible of degree {h} over F_{p}");
            // digits of idx, constant term as the most significant digit
            let mut g = vec![0u64; h + 1];
            let mut rem = idx;
            for j in (0..h).rev() {
                g[j] = (rem % p as u128) as u64;
                rem /= p as u128;
            }
            g[h] = 1;
            // cheap pre-filter: a root in F_p makes g reducible (h >= 2)
            let has_root = (0..p).any(|r| {
                let mut acc = 0u64;
                for &c in g.iter().rev() {
                    acc = (mod_mul64(acc, r, p) + c) % p;
                }
                acc == 0
            });
            if !has_root && fp_poly_irreducible(&g, p) {
                break g;
            }
            idx += 1;
        };
        cache.lock().unwrap().insert((p, h), found.clone());
        found
    }

    pub fn q(&self) -> u64 {
        let mut q = 1u64;
        for _ in 0..self.h {
            q *= self.p;
        }
        q
    }

    pub fn zero(&self) -> FqElem {
        FqElem { coeffs: vec![0; self.h] }
    }

    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FqElem {
        let mut c = vec![0u64; self.h];
        c[0] = n.rem_euclid(self.p as i64) as u64;
        FqElem { coeffs: c }
    }

    pub fn is_zero(&self, a: &FqElem) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    /// Index of an element under the canonical lex ordering (constant term
    /// is the most significant digit).
    pub fn index_of(&self, a: &FqElem) -> u64 {
        let mut i = 0u64;
        for &c in &a.coeffs {
            i = i * self.p + c;
        }
        i
    }

    pub fn elem_from_index(&self, mut i: u64) -> FqElem {
        let mut c = vec![0u64; self.h];
        for j in (0..self.h).rev() {
            c[j] = i % self.p;
            i /= self.p;
        }
        FqElem { coeffs: c }
    }

    /// All q elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q()).map(|i| self.elem_from_index(i))
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FqElem { coeffs }
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect();
        FqElem { coeffs }
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        debug_assert_eq!(a.coeffs.len(), self.h);
        debug_assert_eq!(b.coeffs.len(), self.h);
        let h = self.h;
        if h == 1 {
            return FqElem { coeffs: vec![(a.coeffs[0] * b.coeffs[0]) % self.p] };
        }
        let mut prod = vec![0u64; 2 * h - 1];
        for i in 0..h {
            if a.coeffs[i] == 0 {
                continue;
            }
            for j in 0..h {
                prod[i + j] = (prod[i + j] + a.coeffs[i] * b.coeffs[j]) % self.p;
            }
        }
        // reduce by the monic modulus
        for i in (h..2 * h - 1).rev() {
            let c = prod[i];
            if c != 0 {
                prod[i] = 0;
                for j in 0..h {
                    let t = (c * self.modulus[j]) % self.p;
                    prod[i - h + j] = (prod[i - h + j] + self.p - t) % self.p;
                }
            }
        }
        prod.truncate(h);
        FqElem { coeffs: prod }
    }

    pub fn mul_scalar(&self, a: &FqElem, s: u64) -> FqElem {
        let s = s % self.p;
        FqElem { coeffs: a.coeffs.iter().map(|&c| (c * s) % self.p).collect() }
    }

    pub fn pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FqElem) -> Result<FqElem> {
        if self.is_zero(a) {
            return Err(Error::DivideByZero);
        }
        Ok(self.pow(a, self.q() - 2))
    }

    pub fn div(&self, a: &FqElem, b: &FqElem) -> Result<FqElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Checked binary operation with field-membership validation.
    pub fn arith(&self, a: &FqElem, b: &FqElem, op: FieldOp) -> Result<FqElem> {
        for e in [a, b] {
            if e.coeffs.len() != self.h || e.coeffs.iter().any(|&c| c >= self.p) {
                return Err(Error::FieldMismatch);
            }
        }
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Sub => Ok(self.sub(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Div => self.div(a, b),
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &FqElem) -> u64 {
        let q1 = self.q() - 1;
        let mut ord = q1;
        for (l, _) in factor_u64(q1) {
            while ord % l == 0 && self.pow(a, ord / l) == self.one() {
                ord /= l;
            }
        }
        ord
    }

    /// Least primitive root under the canonical element ordering.
    pub fn primitive_root(&self) -> FqElem {
        let q1 = self.q() - 1;
        let facs = factor_u64(q1);
        'outer: for i in 1..self.q() {
            let g = self.elem_from_index(i);
            for (l, _) in &facs {
                if self.pow(&g, q1 / l) == self.one() {
                    continue 'outer;
                }
            }
            return g;
        }
        unreachable!("every finite field has a primitive root")
    }
}

/// The group mu_m inside F_q^x: powers of the canonical generator
/// zeta = g^{(q-1)/m}, with the discrete-log table zeta^k -> k.
#[derive(Debug, Clone)]
pub struct MuTable {
    pub m: u64,
    pub zeta: FqElem,
    pub elems: Vec<FqElem>,
    dlog: HashMap<FqElem, u64>,
}

impl MuTable {
    pub fn new(field: &FieldSpec, m: u64) -> Result<MuTable> {
        let q1 = field.q() - 1;
        if m == 0 || q1 % m != 0 {
            return Err(Error::OrderMismatch { m, qm1: q1 });
        }
        let g = field.primitive_root();
        let zeta = field.pow(&g, q1 / m);
        let mut elems = Vec::with_capacity(m as usize);
        let mut dlog = HashMap::new();
        let mut cur = field.one();
        for k in 0..m {
            elems.push(cur.clone());
            dlog.insert(cur.clone(), k);
            cur = field.mul(&cur, &zeta);
        }
        Ok(MuTable { m, zeta, elems, dlog })
    }

    pub fn dlog(&self, u: &FqElem) -> Option<u64> {
        self.dlog.get(u).copied()
    }
}

/// Canonical list of the m-th roots of unity plus the dlog table.
pub fn mth_roots_of_unity(field: &FieldSpec, m: u64) -> Result<MuTable> {
    MuTable::new(field, m)
}

/// Degree-k extension tower F_{q^k} / F_q, realized as the canonical field of
/// degree h*k over F_p with a computed embedding of F_q.
#[derive(Debug, Clone)]
pub struct Tower {
    pub base: FieldSpec,
    pub top: FieldSpec,
    pub k: usize,
    gen_pows: Vec<FqElem>,
    inv_map: HashMap<FqElem, FqElem>,
}

impl Tower {
    pub fn new(base: &FieldSpec, k: usize) -> Result<Tower> {
        if k == 0 {
            return Err(Error::DegreeZero);
        }
        let top = FieldSpec::new(base.p, base.h * k)?;
        // canonical image of the base generator: least root of the base
        // modulus inside the top field
        let root = if base.h == 1 {
            top.zero() // unused: embedding of F_p is coefficient-wise
        } else {
            let mut found = None;
            for i in 0..top.q() {
                let x = top.elem_from_index(i);
                if Self::eval_scalar_poly(&top, &base.modulus, &x) == top.zero() {
                    found = Some(x);
                    break;
                }
            }
            found.expect("base modulus splits in the top field")
        };
        let mut gen_pows = Vec::with_capacity(base.h);
        let mut cur = top.one();
        for _ in 0..base.h {
            gen_pows.push(cur.clone());
            cur = top.mul(&cur, &root);
        }
        let mut tower = Tower { base: base.clone(), top, k, gen_pows, inv_map: HashMap::new() };
        let mut inv_map = HashMap::with_capacity(base.q() as usize);
        for a in base.elements() {
            inv_map.insert(tower.embed(&a), a);
        }
        tower.inv_map = inv_map;
        Ok(tower)
    }

    fn eval_scalar_poly(f: &FieldSpec, poly: &[u64], x: &FqElem) -> FqElem {
        let mut acc = f.zero();
        for &c in poly.iter().rev() {
            acc = f.mul(&acc, x);
            acc.coeffs[0] = (acc.coeffs[0] + c) % f.p;
        }
        acc
    }

    pub fn embed(&self, a: &FqElem) -> FqElem {
        let mut acc = self.top.zero();
        for (i, &c) in a.coeffs.iter().enumerate() {
            if c != 0 {
                acc = self.top.add(&acc, &self.top.mul_scalar(&self.gen_pows[i], c));
            }
        }
        acc
    }

    /// Pull a top-field element back to F_q if it lies in the embedded image.
    pub fn to_base(&self, b: &FqElem) -> Option<FqElem> {
        self.inv_map.get(b).cloned()
    }

    /// Field norm N_{F_{q^k}/F_q}(a) = a^{1 + q + ... + q^{k-1}}.
    pub fn norm_to_base(&self, a: &FqElem) -> FqElem {
        if self.top.is_zero(a) {
            return self.base.zero();
        }
        let q = self.base.q();
        let mut exp: u64 = 0;
        let mut qk: u64 = 1;
        for _ in 0..self.k {
            exp += qk;
            qk = qk.wrapping_mul(q);
        }
        let n = self.top.pow(a, exp);
        self.to_base(&n).expect("norm lands in the base field")
    }

    /// Frobenius x -> x^q of the top field over the base.
    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        self.top.pow(a, self.base.q())
    }
}

/// Spec entry point: canonical field construction.
pub fn make_field(p: u64, h: usize) -> Result<FieldSpec> {
    FieldSpec::new(p, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f7_is_plain_prime_field() {
        let f = make_field(7, 1).unwrap();
        assert_eq!(f.modulus, vec![0, 1]);
        assert_eq!(f.q(), 7);
    }

    #[test]
    fn canonical_modulus_f25_by_independent_enumeration() {
        // oracle: scan monic quadratics over F_5 in lex order, test by root
        // search, freeze the first hit
        let p = 5u64;
        let mut expected = None;
        'outer: for c0 in 0..p {
            for c1 in 0..p {
                let has_root = (0..p).any(|x| (x * x + c1 * x + c0) % p == 0);
                if !has_root {
                    expected = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        let f = make_field(5, 2).unwrap();
        assert_eq!(f.modulus, expected.unwrap());
    }

    #[test]
    fn f4_modulus_is_x2_x_1() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.modulus, vec![1, 1, 1]);
    }

    #[test]
    fn make_field_rejects_bad_input() {
        assert_eq!(make_field(6, 1).unwrap_err(), Error::NonPrime(6));
        assert_eq!(make_field(7, 0).unwrap_err(), Error::DegreeZero);
    }

    #[test]
    fn prime_field_arith() {
        let f = make_field(7, 1).unwrap();
        let three = f.from_int(3);
        assert_eq!(f.pow(&three, 2), f.from_int(2));
        assert_eq!(f.mul(&f.from_int(4), &f.from_int(2)), f.one());
    }

    #[test]
    fn f25_generator_squares_reduce_by_modulus() {
        let f = make_field(5, 2).unwrap();
        // x * x must equal x^2 reduced by the canonical modulus: -c0 - c1*x
        let x = FqElem { coeffs: vec![0, 1] };
        let x2 = f.mul(&x, &x);
        let expected = FqElem {
            coeffs: vec![(5 - f.modulus[0]) % 5, (5 - f.modulus[1]) % 5],
        };
        assert_eq!(x2, expected);
    }

    #[test]
    fn every_nonzero_element_has_order_dividing_q_minus_1() {
        for (p, h) in [(2u64, 2usize), (3, 2), (5, 2), (7, 3)] {
            let f = make_field(p, h).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(f.pow(&a, f.q() - 1), f.one());
            }
        }
    }

    #[test]
    fn mu3_in_f7_matches_hand_computation() {
        let f = make_field(7, 1).unwrap();
        let mu = mth_roots_of_unity(&f, 3).unwrap();
        // least primitive root of F_7 is 3, zeta = 3^2 = 2
        assert_eq!(mu.zeta, f.from_int(2));
        let vals: Vec<u64> = mu.elems.iter().map(|e| e.coeffs[0]).collect();
        assert_eq!(vals, vec![1, 2, 4]);
        assert_eq!(mu.dlog(&f.from_int(4)), Some(2));
    }

    #[test]
    fn mu2_in_f7_is_plus_minus_one() {
        let f = make_field(7, 1).unwrap();
        let mu = mth_roots_of_unity(&f, 2).unwrap();
        let vals: Vec<u64> = mu.elems.iter().map(|e| e.coeffs[0]).collect();
        assert_eq!(vals, vec![1, 6]);
    }

    #[test]
    fn mu3_in_f4_is_all_of_f4_star() {
        let f = make_field(2, 2).unwrap();
        let mu = mth_roots_of_unity(&f, 3).unwrap();
        let mut got: Vec<u64> = mu.elems.iter().map(|e| f.index_of(e)).collect();
        got.sort_unstable();
        assert_eq!(got, vec![1, 2, 3]);
    }

    #[test]
    fn order_mismatch_reported() {
        let f = make_field(7, 1).unwrap();
        assert!(matches!(mth_roots_of_unity(&f, 5), Err(Error::OrderMismatch { .. })));
    }

    #[test]
    fn dlog_table_inverts_zeta_powers() {
        for (p, h, m) in [(7u64, 1usize, 3u64), (5, 2, 3), (31, 1, 5), (2, 4, 5)] {
            let f = make_field(p, h).unwrap();
            let mu = mth_roots_of_unity(&f, m).unwrap();
            for u in &mu.elems {
                let k = mu.dlog(u).unwrap();
                assert_eq!(&f.pow(&mu.zeta, k), u);
            }
        }
    }

    #[test]
    fn norm_is_multiplicative_and_surjective() {
        let base = make_field(5, 1).unwrap();
        let t = Tower::new(&base, 2).unwrap();
        let top = &t.top;
        let mut hit = std::collections::HashSet::new();
        for a in top.elements() {
            for b in top.elements().take(8) {
                let lhs = t.norm_to_base(&top.mul(&a, &b));
                let rhs = base.mul(&t.norm_to_base(&a), &t.norm_to_base(&b));
                assert_eq!(lhs, rhs);
            }
            if !top.is_zero(&a) {
                hit.insert(t.norm_to_base(&a));
            }
        }
        assert_eq!(hit.len() as u64, base.q() - 1);
    }

    #[test]
    fn norm_of_modulus_root_is_frobenius_invariant() {
        // F_25/F_5: for a root a of the modulus, N(a) = a * a^5 lies in F_5
        let base = make_field(5, 1).unwrap();
        let t = Tower::new(&base, 2).unwrap();
        for a in t.top.elements() {
            let n = t.norm_to_base(&a);
            let frob_then_norm = t.norm_to_base(&t.frobenius(&a));
            assert_eq!(n, frob_then_norm);
        }
        // k = 1 is the identity; zero maps to zero
        let t1 = Tower::new(&base, 1).unwrap();
        let three = base.from_int(3);
        assert_eq!(t1.norm_to_base(&t1.embed(&three)), three);
        assert_eq!(t1.norm_to_base(&t1.top.zero()), base.zero());
    }

    #[test]
    fn embedding_respects_base_arithmetic() {
        let base = make_field(5, 2).unwrap();
        let t = Tower::new(&base, 2).unwrap();
        for a in base.elements().take(12) {
            for b in base.elements().take(12) {
                assert_eq!(
                    t.embed(&base.mul(&a, &b)),
                    t.top.mul(&t.embed(&a), &t.embed(&b))
                );
            }
        }
    }

    #[test]
    fn checked_arith_reports_mismatch_and_div_by_zero() {
        let f = make_field(7, 1).unwrap();
        let g = make_field(5, 2).unwrap();
        let a = f.from_int(3);
        let b = g.from_int(2);
        assert_eq!(f.arith(&a, &b, FieldOp::Add).unwrap_err(), Error::FieldMismatch);
        assert_eq!(f.arith(&a, &f.zero(), FieldOp::Div).unwrap_err(), Error::DivideByZero);
    }
}
