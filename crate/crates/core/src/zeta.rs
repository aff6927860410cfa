//! Brute-force zeta oracle: place counting on the smooth model of
//! y^m = f(x), zeta numerator via Newton identities, p-rank as the mod-p
//! degree, and an exact supersingularity decision.
//!
//! Everything here is independent of the character-sum machinery so the two
//! routes can be cross-validated against each other.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::charsum::{Base, CurveSpec};
use crate::error::{Error, Result};
use crate::exec;
use crate::ff::{FieldSpec, FqElem, Tower};

/// Never spend more than this many terms on the optional redundant count
/// used as a self-check, whatever the user budget is.
const EXTRA_COUNT_CAP: u128 = 250_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaData {
    /// directly counted N_1, N_2, ...
    pub counts: Vec<i128>,
    /// L(t) = prod (1 - alpha_i t), ascending coefficients, L(0) = 1
    pub l_coeffs: Vec<i128>,
    pub genus: u64,
    pub prank: u64,
    pub supersingular: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedPoint {
    pub degree: usize,
    /// affine x coordinate in the degree-`degree` tower top; None at infinity
    pub x: Option<FqElem>,
    /// y coordinate (None on P^1 and at totally ramified infinite places)
    pub y: Option<FqElem>,
    pub infinite: bool,
    /// lies over the ramification locus T of the curve's own cover data
    pub in_t: bool,
}

pub struct ClosedPointSet {
    pub max_degree: usize,
    /// towers[k-1] is the degree-k extension tower over the base field
    pub towers: Vec<Tower>,
    pub points: Vec<ClosedPoint>,
}

fn pow_u128(q: u64, k: usize) -> u128 {
    let mut t: u128 = 1;
    for _ in 0..k {
        t = t.saturating_mul(q as u128);
    }
    t
}

/// Bitmap of m-th powers among the nonzero elements of `field` (index-keyed),
/// built from one pass over the powers of the primitive root.
fn mth_power_bitmap(field: &FieldSpec, g0: u64) -> Vec<bool> {
    let q = field.q();
    let mut map = vec![false; q as usize];
    let g = field.primitive_root();
    let mut z = field.one();
    map[field.index_of(&z) as usize] = true;
    for k in 1..q - 1 {
        z = field.mul(&z, &g);
        if k % g0 == 0 {
            map[field.index_of(&z) as usize] = true;
        }
    }
    map
}

/// N_k: number of degree-1 places of the smooth model over F_{q^k}.
pub fn count_points(
    curve: &CurveSpec,
    k: usize,
    threads: usize,
    max_terms: u128,
) -> Result<i128> {
    let base_field = &curve.field;
    let big_q = pow_u128(base_field.q(), k);
    if big_q > max_terms {
        return Err(Error::BudgetExceeded(big_q));
    }
    let tower = Tower::new(base_field, k)?;
    let top = tower.top.clone();
    let qk = top.q();
    let m = curve.m;
    let g0 = num_integer::gcd(m, qk - 1);
    let power_map = if g0 > 1 { mth_power_bitmap(&top, g0) } else { Vec::new() };
    let is_mth_power = |u: &FqElem| g0 == 1 || power_map[top.index_of(u) as usize];

    let branch_emb: Vec<(FqElem, u64)> = curve
        .branch
        .iter()
        .zip(&curve.exponents)
        .map(|(x, &a)| (tower.embed(x), a))
        .collect();
    let branch_idx: HashMap<u64, u64> =
        branch_emb.iter().map(|(x, a)| (top.index_of(x), *a)).collect();

    let affine: i128 = match &curve.base {
        Base::P1 => exec::map_reduce(
            qk,
            threads,
            |range| {
                let mut n: i128 = 0;
                for idx in range {
                    if branch_idx.contains_key(&idx) {
                        // v = a_i is a unit mod the prime m: one place
                        n += 1;
                        continue;
                    }
                    let x0 = top.elem_from_index(idx);
                    let mut u = top.one();
                    for (xi, a) in &branch_emb {
                        let t = top.sub(&x0, xi);
                        u = top.mul(&u, &top.pow(&t, *a));
                    }
                    if is_mth_power(&u) {
                        n += g0 as i128;
                    }
                }
                n
            },
            |a, b| a + b,
            0,
        ),
        Base::Superelliptic { m0, f0 } => {
            let deg_f0 = f0.len() - 1;
            if deg_f0 as u64 % m == 0 {
                return Err(Error::WrongShape(
                    "superelliptic base with m | deg f0 is not supported".into(),
                ));
            }
            let f0_emb: Vec<FqElem> = f0.iter().map(|c| tower.embed(c)).collect();
            // all m0-th roots of each field element, index-keyed
            let mut roots: Vec<Vec<u64>> = vec![Vec::new(); qk as usize];
            for yi in 0..qk {
                let y = top.elem_from_index(yi);
                let w = top.pow(&y, *m0);
                roots[top.index_of(&w) as usize].push(yi);
            }
            exec::map_reduce(
                qk,
                threads,
                |range| {
                    let mut n: i128 = 0;
                    for idx in range {
                        let x0 = top.elem_from_index(idx);
                        let mut w = top.zero();
                        for c in f0_emb.iter().rev() {
                            w = top.mul(&w, &x0);
                            w = top.add(&w, c);
                        }
                        if top.is_zero(&w) {
                            // base place with y0 = 0: v(y0) = 1, one place above
                            n += 1;
                            continue;
                        }
                        for &yi in &roots[top.index_of(&w) as usize] {
                            let y0 = top.elem_from_index(yi);
                            if is_mth_power(&y0) {
                                n += g0 as i128;
                            }
                        }
                    }
                    n
                },
                |a, b| a + b,
                0,
            )
        }
    };

    // the place(s) at infinity
    let at_infinity: i128 = match &curve.base {
        Base::P1 => {
            if curve.sum_a() % m != 0 {
                1
            } else {
                // f is monic of m-divisible degree: the unit at infinity is 1
                g0 as i128
            }
        }
        // one totally ramified base place; v(y0) = -deg f0, not 0 mod m
        Base::Superelliptic { .. } => 1,
    };
    Ok(affine + at_infinity)
}

/// Genus of the smooth model (Riemann-Hurwitz).
pub fn genus(curve: &CurveSpec) -> u64 {
    curve.genus_cover()
}

fn prank_from_l(l: &[i128], p: u64) -> u64 {
    let p = p as i128;
    l.iter().rposition(|c| c % p != 0).unwrap_or(0) as u64
}

/// Full oracle run: counts, L(t), genus, p-rank, supersingularity.
pub fn zeta_numerator(curve: &CurveSpec, threads: usize, max_terms: u128) -> Result<ZetaData> {
    let pi = curve.genus_cover() as usize;
    let q = curve.q();
    if pi == 0 {
        return Ok(ZetaData {
            counts: vec![],
            l_coeffs: vec![1],
            genus: 0,
            prank: 0,
            supersingular: true,
        });
    }
    let full = pow_u128(q, 2 * pi) <= max_terms;
    let n_counts = if full { 2 * pi } else { pi };
    if pow_u128(q, n_counts) > max_terms {
        return Err(Error::BudgetExceeded(pow_u128(q, n_counts)));
    }
    let mut counts = Vec::with_capacity(n_counts);
    for k in 1..=n_counts {
        counts.push(count_points(curve, k, threads, max_terms)?);
    }
    // Weil bound |N_k - q^k - 1| <= 2 pi q^{k/2}, checked by squaring
    for (k, &n) in counts.iter().enumerate() {
        let qk = pow_u128(q, k + 1) as i128;
        let diff = n - qk - 1;
        if diff * diff > (4 * (pi * pi) as i128) * qk {
            return Err(Error::InconsistentCounts);
        }
    }
    // Newton identities: power sums s_k = q^k + 1 - N_k of the inverse roots
    let mut s = Vec::with_capacity(n_counts);
    for (k, &n) in counts.iter().enumerate() {
        s.push(pow_u128(q, k + 1) as i128 + 1 - n);
    }
    let mut e = vec![0i128; n_counts + 1];
    e[0] = 1;
    for k in 1..=n_counts {
        let mut acc: i128 = 0;
        for i in 1..=k {
            let term = e[k - i] * s[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if acc % k as i128 != 0 {
            return Err(Error::InconsistentCounts);
        }
        e[k] = acc / k as i128;
    }
    let mut l = vec![0i128; 2 * pi + 1];
    for k in 0..=n_counts {
        l[k] = if k % 2 == 0 { e[k] } else { -e[k] };
    }
    if full {
        // functional equation must hold on its own
        for i in 0..pi {
            if l[2 * pi - i] != pow_u128(q, pi - i) as i128 * l[i] {
                return Err(Error::InconsistentCounts);
            }
        }
    } else {
        for i in 0..pi {
            l[2 * pi - i] = pow_u128(q, pi - i) as i128 * l[i];
        }
    }
    // L(1) = #Pic^0 > 0
    if l.iter().sum::<i128>() <= 0 {
        return Err(Error::InconsistentCounts);
    }
    // one redundant count when cheap: recount N_{n+1} and compare with the
    // value predicted by L
    let next = n_counts + 1;
    if next <= 2 * pi + 1 && pow_u128(q, next) <= EXTRA_COUNT_CAP.min(max_terms) {
        let predicted = {
            // p_k from the e_k by the Newton recurrence
            let e_of = |i: usize| -> i128 {
                if i > 2 * pi {
                    0
                } else if i % 2 == 0 {
                    l[i]
                } else {
                    -l[i]
                }
            };
            let mut sv = s.clone();
            for k in n_counts + 1..=next {
                let mut pk: i128 = 0;
                for i in 1..k {
                    let term = e_of(i) * sv[k - i - 1];
                    if i % 2 == 1 {
                        pk += term;
                    } else {
                        pk -= term;
                    }
                }
                let last = (k as i128) * e_of(k);
                if k % 2 == 1 {
                    pk += last;
                } else {
                    pk -= last;
                }
                sv.push(pk);
            }
            pow_u128(q, next) as i128 + 1 - sv[next - 1]
        };
        let recount = count_points(curve, next, threads, max_terms)?;
        if recount != predicted {
            return Err(Error::InconsistentCounts);
        }
    }
    let prank = prank_from_l(&l, curve.p());
    let supersingular = supersingular_test(&l, q);
    Ok(ZetaData { counts, l_coeffs: l, genus: pi as u64, prank, supersingular })
}

// ---- supersingularity ----

type QPoly = Vec<BigRational>;

fn qp_trim(v: &mut QPoly) {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
}

fn qp_deriv(a: &QPoly) -> QPoly {
    if a.len() <= 1 {
        return vec![BigRational::zero()];
    }
    let mut out: QPoly =
        a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from(BigInt::from(i))).collect();
    qp_trim(&mut out);
    out
}

fn qp_rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    qp_trim(&mut r);
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let coef = r.last().unwrap() / &lead;
        let shift = r.len() - 1 - db;
        for i in 0..=db {
            let t = &coef * &b[i];
            r[shift + i] = &r[shift + i] - t;
        }
        r.pop();
        qp_trim(&mut r);
    }
    if r.is_empty() {
        r.push(BigRational::zero());
    }
    r
}

fn qp_div_exact(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    qp_trim(&mut r);
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    let mut quo = vec![BigRational::zero(); r.len().saturating_sub(db)];
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let coef = r.last().unwrap() / &lead;
        let shift = r.len() - 1 - db;
        quo[shift] = coef.clone();
        for i in 0..=db {
            let t = &coef * &b[i];
            r[shift + i] = &r[shift + i] - t;
        }
        r.pop();
        qp_trim(&mut r);
        if r.is_empty() {
            r.push(BigRational::zero());
        }
    }
    debug_assert!(r.iter().all(|c| c.is_zero()), "division was not exact");
    if quo.is_empty() {
        quo.push(BigRational::zero());
    }
    quo
}

fn qp_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    qp_trim(&mut x);
    qp_trim(&mut y);
    while !(y.len() == 1 && y[0].is_zero()) {
        let r = qp_rem(&x, &y);
        x = y;
        y = r;
    }
    // monic normalization
    let lead = x.last().unwrap().clone();
    if !lead.is_zero() && !lead.is_one() {
        for c in &mut x {
            *c = &*c / &lead;
        }
    }
    x
}

fn euler_phi(mut n: u64) -> u64 {
    let mut out = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out -= out / d;
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// True iff every Frobenius eigenvalue is a root of unity times sqrt(q):
/// each irreducible factor of the (squarefree part of the) reversed
/// numerator must divide t^{2j} - q^j for some j with phi(j) <= 2 pi.
pub fn supersingular_test(l_coeffs: &[i128], q: u64) -> bool {
    let deg = l_coeffs.len() - 1;
    if deg == 0 {
        return true;
    }
    // reversed (companion) polynomial prod (t - alpha_i), monic
    let psi: QPoly = l_coeffs
        .iter()
        .rev()
        .map(|&c| BigRational::from(BigInt::from(c)))
        .collect();
    let mut r = qp_div_exact(&psi, &qp_gcd(&psi, &qp_deriv(&psi)));
    let two_pi = deg as u64;
    for j in 1..=(2 * two_pi * two_pi + 40) {
        if euler_phi(j) > two_pi {
            continue;
        }
        if r.len() == 1 {
            break;
        }
        // t^{2j} - q^j
        let mut dj: QPoly = vec![BigRational::zero(); 2 * j as usize + 1];
        dj[0] = -BigRational::from(BigInt::from(q).pow(j as u32));
        dj[2 * j as usize] = BigRational::one();
        let g = qp_gcd(&r, &dj);
        if g.len() > 1 {
            r = qp_div_exact(&r, &g);
        }
    }
    r.len() == 1
}

/// p-rank read off as the degree of L mod p.
pub fn prank(curve: &CurveSpec, threads: usize, max_terms: u128) -> Result<u64> {
    Ok(zeta_numerator(curve, threads, max_terms)?.prank)
}

// ---- closed points ----

/// All closed points of P^1 over F_q of degree <= max_degree.
pub fn closed_points_p1(
    field: &FieldSpec,
    max_degree: usize,
    max_terms: u128,
) -> Result<ClosedPointSet> {
    let mut towers = Vec::with_capacity(max_degree);
    let mut points = Vec::new();
    points.push(ClosedPoint { degree: 1, x: None, y: None, infinite: true, in_t: false });
    for k in 1..=max_degree {
        if pow_u128(field.q(), k) > max_terms {
            return Err(Error::BudgetExceeded(pow_u128(field.q(), k)));
        }
        let tower = Tower::new(field, k)?;
        let top = tower.top.clone();
        for idx in 0..top.q() {
            let x = top.elem_from_index(idx);
            // orbit under x -> x^q; keep exact-degree canonical reps
            let mut orbit_len = 1;
            let mut least = idx;
            let mut cur = tower.frobenius(&x);
            while cur != x {
                least = least.min(top.index_of(&cur));
                cur = tower.frobenius(&cur);
                orbit_len += 1;
            }
            if orbit_len == k && least == idx {
                points.push(ClosedPoint {
                    degree: k,
                    x: Some(x),
                    y: None,
                    infinite: false,
                    in_t: false,
                });
            }
        }
        towers.push(tower);
    }
    Ok(ClosedPointSet { max_degree, towers, points })
}

/// Closed points of the smooth model of the curve, degrees <= max_degree,
/// with places over the ramification locus T flagged.
pub fn closed_points(
    curve: &CurveSpec,
    max_degree: usize,
    max_terms: u128,
) -> Result<ClosedPointSet> {
    let field = &curve.field;
    let m = curve.m;
    let mut towers = Vec::with_capacity(max_degree);
    let mut points = Vec::new();
    // the place(s) at infinity
    let inf_ramified = match &curve.base {
        Base::P1 => curve.sum_a() % m != 0,
        Base::Superelliptic { .. } => true, // validated: m0 does not divide deg f0
    };
    for k in 1..=max_degree {
        let big_q = pow_u128(field.q(), k);
        if big_q > max_terms {
            return Err(Error::BudgetExceeded(big_q));
        }
        let tower = Tower::new(field, k)?;
        let top = tower.top.clone();
        let qk = top.q();

        if k == 1 && inf_ramified {
            points.push(ClosedPoint { degree: 1, x: None, y: None, infinite: true, in_t: true });
        }

        // affine places: solutions (x, y) of y^mm = ff(x) on the plane model
        let (mm, fpoly): (u64, Vec<FqElem>) = match &curve.base {
            Base::P1 => {
                // use f = prod (x - x_i)^{a_i} directly
                (m, Vec::new())
            }
            Base::Superelliptic { m0, f0 } => (*m0, f0.iter().map(|c| tower.embed(c)).collect()),
        };
        let branch_emb: Vec<(FqElem, u64)> = curve
            .branch
            .iter()
            .zip(&curve.exponents)
            .map(|(x, &a)| (tower.embed(x), a))
            .collect();
        let mut roots: Vec<Vec<u64>> = vec![Vec::new(); qk as usize];
        for yi in 0..qk {
            let y = top.elem_from_index(yi);
            let w = top.pow(&y, mm);
            roots[top.index_of(&w) as usize].push(yi);
        }
        if !inf_ramified {
            // P^1 base, m | sum a_i: the fibre over infinity is split and off
            // T; since f is monic the points carry the m-th roots of unity
            for &yi in &roots[top.index_of(&top.one()) as usize] {
                let y0 = top.elem_from_index(yi);
                let mut orbit_len = 1;
                let mut least = yi;
                let mut cur = tower.frobenius(&y0);
                while cur != y0 {
                    least = least.min(top.index_of(&cur));
                    cur = tower.frobenius(&cur);
                    orbit_len += 1;
                }
                if orbit_len == k && least == yi {
                    points.push(ClosedPoint {
                        degree: k,
                        x: None,
                        y: Some(y0),
                        infinite: true,
                        in_t: false,
                    });
                }
            }
        }
        for xi in 0..qk {
            let x0 = top.elem_from_index(xi);
            let w = match &curve.base {
                Base::P1 => {
                    let mut u = top.one();
                    for (b, a) in &branch_emb {
                        u = top.mul(&u, &top.pow(&top.sub(&x0, b), *a));
                    }
                    u
                }
                Base::Superelliptic { .. } => {
                    let mut u = top.zero();
                    for c in fpoly.iter().rev() {
                        u = top.mul(&u, &x0);
                        u = top.add(&u, c);
                    }
                    u
                }
            };
            let ys: Vec<FqElem> = if top.is_zero(&w) {
                vec![top.zero()]
            } else {
                roots[top.index_of(&w) as usize]
                    .iter()
                    .map(|&yi| top.elem_from_index(yi))
                    .collect()
            };
            for y0 in ys {
                let mut orbit_len = 1;
                let mut least = (xi, top.index_of(&y0));
                let (mut cx, mut cy) = (tower.frobenius(&x0), tower.frobenius(&y0));
                while cx != x0 || cy != y0 {
                    least = least.min((top.index_of(&cx), top.index_of(&cy)));
                    cx = tower.frobenius(&cx);
                    cy = tower.frobenius(&cy);
                    orbit_len += 1;
                }
                if orbit_len == k && least == (xi, top.index_of(&y0)) {
                    points.push(ClosedPoint {
                        degree: k,
                        x: Some(x0.clone()),
                        y: Some(y0.clone()),
                        infinite: false,
                        in_t: top.is_zero(&w),
                    });
                }
            }
        }
        towers.push(tower);
    }
    Ok(ClosedPointSet { max_degree, towers, points })
}
