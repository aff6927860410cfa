//! Exponent combinatorics (d_u, theta, orbit sums O_t) and the decision
//! procedures built on them: the non-supersingularity / non-p-rank-0 tests,
//! the p-rank-0 equation systems, the Deuring polynomial, and the
//! multi-route p-rank verdict aggregation.

use serde::{Deserialize, Serialize};

use crate::cartier;
use crate::charsum::{self, Base, CurveSpec};
use crate::cyclo;
use crate::error::{Error, Result};
use crate::ff::{self, make_field, FieldSpec, FqElem, MuTable};
use crate::zeta;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentData {
    pub m: u64,
    pub a: Vec<u64>,
    pub p: u64,
    /// multiplicative order of p mod m
    pub h: usize,
    /// number of primes above p: (m-1)/h
    pub b: usize,
    /// the subgroup C_h generated by p in (Z/m)^*, sorted
    pub c_h: Vec<u64>,
    /// least representative of each coset of C_h, sorted
    pub e_h: Vec<u64>,
    /// d_u for u = 1..m-1 (index 0 unused)
    pub d_u: Vec<u64>,
    /// orbit sums O_t = sum over u in C_h of d_{tu}, keyed by t in e_h
    pub o_t: Vec<(u64, u64)>,
}

pub fn exponent_data(m: u64, a: &[u64], p: u64) -> Result<ExponentData> {
    if !ff::is_prime(m) {
        return Err(Error::NonPrime(m));
    }
    if !ff::is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if p == m {
        return Err(Error::RamifiedPrime(p));
    }
    for &ai in a {
        if ai == 0 || ai >= m {
            return Err(Error::BadExponent { a: ai, m });
        }
    }
    let mut d_u = vec![0u64; m as usize];
    for u in 1..m {
        let s: u64 = a.iter().map(|&ai| (u * ai) % m).sum();
        d_u[u as usize] = s / m;
    }
    let mut c_h = Vec::new();
    let mut x = p % m;
    loop {
        c_h.push(x);
        x = (x * (p % m)) % m;
        if x == p % m {
            break;
        }
    }
    c_h.sort_unstable();
    let h = c_h.len();
    let mut seen = vec![false; m as usize];
    let mut e_h = Vec::new();
    for u in 1..m {
        if seen[u as usize] {
            continue;
        }
        let mut least = u;
        for &c in &c_h {
            let v = (u * c) % m;
            seen[v as usize] = true;
            least = least.min(v);
        }
        e_h.push(least);
    }
    e_h.sort_unstable();
    let b = e_h.len();
    debug_assert_eq!(b * h, (m - 1) as usize);
    let o_t = e_h
        .iter()
        .map(|&t| (t, c_h.iter().map(|&u| d_u[((t * u) % m) as usize]).sum()))
        .collect();
    Ok(ExponentData { m, a: a.to_vec(), p, h, b, c_h, e_h, d_u, o_t })
}

impl ExponentData {
    pub fn o_of(&self, t: u64) -> u64 {
        // O_t is constant on cosets of C_h
        for &(r, o) in &self.o_t {
            if self.c_h.iter().any(|&c| (r * c) % self.m == t % self.m) {
                return o;
            }
        }
        unreachable!("every unit lies in some coset")
    }

    /// Stickelberger exponents: the multiset of O_t over the coset reps,
    /// i.e. the valuations of the Jacobi-sum ideal at the primes above p.
    pub fn theta_multiset(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.o_t.iter().map(|&(_, o)| o).collect();
        v.sort_unstable();
        v
    }
}

/// Thm 6.5(1): some O_t differs from O_1 => certified not supersingular.
pub fn not_supersingular_test(e: &ExponentData) -> bool {
    let o1 = e.o_of(1);
    e.o_t.iter().any(|&(_, o)| o != o1)
}

/// Thm 6.5(2), base P^1: some O_t = 0 => certified p-rank > 0.
pub fn not_prank0_test(e: &ExponentData) -> bool {
    e.o_t.iter().any(|&(_, o)| o == 0)
}

/// Stickelberger consistency: valuations of J_(a) at the primes above p
/// equal the theta exponents, as multisets. Requires sum a_i != 0 mod m.
pub fn stickelberger_check(m: u64, a: &[u64], p: u64) -> Result<bool> {
    let e = exponent_data(m, a, p)?;
    if a.iter().sum::<u64>() % m == 0 {
        return Err(Error::HypothesisViolated);
    }
    let field = make_field(p, e.h)?;
    let j = charsum::jacobi_sum(&field, m, a)?;
    let mut vals = cyclo::valuations_auto(&j, m, p)?;
    vals.sort_unstable();
    let theta: Vec<u32> = e.theta_multiset().iter().map(|&x| x as u32).collect();
    Ok(vals == theta)
}

// ---- p-rank 0 equation systems (Thm 6.7) ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prank0System {
    /// (divisor degree l, character power j) per equation
    pub equations: Vec<(usize, u64)>,
    pub satisfied: Vec<bool>,
    /// inert route (single prime above p) vs split/general route
    pub inert: bool,
    /// p-rank of the base curve is 0 (trivially true on P^1)
    pub base_prank0: bool,
    pub verdict: bool,
}

/// Is s = 0 modulo the distinguished prime above p (the kernel of
/// eps -> zeta into F_q)?
pub fn zero_mod_distinguished(s: &cyclo::CycloInt, field: &FieldSpec) -> Result<bool> {
    let mu = MuTable::new(field, s.m)?;
    Ok(field.is_zero(&s.reduce_mod_prime(field, &mu)))
}

/// Thm 6.7: the exact system of divisor-sum congruences equivalent to
/// p-rank 0 (inert case for any base with p-rank 0; split/general case for
/// base P^1 under the orbit-sum hypothesis).
pub fn prank0_equations(
    curve: &CurveSpec,
    threads: usize,
    max_terms: u128,
) -> Result<Prank0System> {
    let m = curve.m;
    let tuple: Vec<u64> = if curve.infinity_in_t() {
        curve.exponents.clone()
    } else {
        curve.exponents[1..].to_vec()
    };
    let e = exponent_data(m, &tuple, curve.p())?;
    let g = curve.genus_base() as usize;
    let d = curve.d_paper();
    let inert = e.b == 1;
    let (equations, base_prank0): (Vec<(usize, u64)>, bool) = if inert {
        let base_prank0 = match &curve.base {
            Base::P1 => true,
            Base::Superelliptic { .. } => {
                zeta::zeta_numerator(&curve.base_curve()?, threads, max_terms)?.prank == 0
            }
        };
        let top = (2 * g + d).saturating_sub(2);
        ((1..=top).map(|l| (l, 1)).collect(), base_prank0)
    } else {
        if !matches!(curve.base, Base::P1) {
            return Err(Error::BaseNotP1);
        }
        if e.o_t.iter().any(|&(_, o)| o == 0) {
            return Err(Error::HypothesisViolated);
        }
        let mut eqs = Vec::new();
        for &j in &e.e_h {
            for l in 1..=d.saturating_sub(2) {
                eqs.push((l, j));
            }
        }
        (eqs, true)
    };
    let mut satisfied = Vec::with_capacity(equations.len());
    for &(l, j) in &equations {
        let s = charsum::divisor_char_sum(curve, l, j, threads, max_terms)?;
        satisfied.push(zero_mod_distinguished(&s, &curve.field)?);
    }
    let verdict = base_prank0 && satisfied.iter().all(|&b| b);
    Ok(Prank0System { equations, satisfied, inert, base_prank0, verdict })
}

// ---- Deuring polynomial ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeuringData {
    pub p: u64,
    /// H(lambda) coefficients mod p, ascending
    pub coeffs: Vec<u64>,
    pub field: FieldSpec,
    /// roots of H in F_{p^2}
    pub roots: Vec<FqElem>,
}

/// H(lambda) = sum binom(r, i)^2 lambda^i mod p, r = (p-1)/2, with its roots
/// in F_{p^2} (the supersingular Legendre parameters).
pub fn deuring(p: u64) -> Result<DeuringData> {
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if !ff::is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    let r = (p - 1) / 2;
    // binom(r, i) mod p by the multiplicative recurrence; all factors < p
    let mut coeffs = Vec::with_capacity(r as usize + 1);
    let mut c: u64 = 1;
    coeffs.push(1u64);
    for i in 1..=r {
        c = ff::mod_mul64(c, (r - i + 1) % p, p);
        c = ff::mod_mul64(c, ff::mod_pow64(i % p, p - 2, p), p);
        coeffs.push(ff::mod_mul64(c, c, p));
    }
    let field = make_field(p, 2)?;
    let mut roots = Vec::new();
    for idx in 0..field.q() {
        let lam = field.elem_from_index(idx);
        let mut acc = field.zero();
        for &co in coeffs.iter().rev() {
            acc = field.mul(&acc, &lam);
            acc.coeffs[0] = (acc.coeffs[0] + co) % p;
        }
        if field.is_zero(&acc) {
            roots.push(lam);
        }
    }
    Ok(DeuringData { p, coeffs, field, roots })
}

// ---- multi-route p-rank verdicts ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrankVerdict {
    pub route: String,
    /// exact p-rank when the route computes one
    pub prank: Option<u64>,
    /// three-valued p-rank-0 verdict; None = route inconclusive
    pub prank_zero: Option<bool>,
    pub supersingular: Option<bool>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Criterion,
    Oracle,
    Cartier,
}

pub fn run_route(
    curve: &CurveSpec,
    route: Route,
    threads: usize,
    max_terms: u128,
) -> Result<PrankVerdict> {
    match route {
        Route::Oracle => {
            let z = zeta::zeta_numerator(curve, threads, max_terms)?;
            Ok(PrankVerdict {
                route: "oracle".into(),
                prank: Some(z.prank),
                prank_zero: Some(z.prank == 0),
                supersingular: Some(z.supersingular),
                note: None,
            })
        }
        Route::Cartier => {
            if curve.m != 2
                || !matches!(curve.base, Base::P1)
                || curve.exponents.iter().any(|&a| a != 1)
            {
                return Err(Error::WrongShape(
                    "Cartier route requires a hyperelliptic model y^2 = f(x), f squarefree".into(),
                ));
            }
            let field = &curve.field;
            let mut f = vec![field.one()];
            for x in &curve.branch {
                let mut next = vec![field.zero(); f.len() + 1];
                for (i, c) in f.iter().enumerate() {
                    next[i + 1] = field.add(&next[i + 1], c);
                    next[i] = field.sub(&next[i], &field.mul(c, x));
                }
                f = next;
            }
            let a = cartier::cartier_matrix(field, &f)?;
            let rank = cartier::semilinear_prank(&a);
            Ok(PrankVerdict {
                route: "cartier".into(),
                prank: Some(rank),
                prank_zero: Some(rank == 0),
                supersingular: None,
                note: None,
            })
        }
        Route::Criterion => {
            let tuple: Vec<u64> = if curve.infinity_in_t() {
                curve.exponents.clone()
            } else {
                curve.exponents[1..].to_vec()
            };
            let e = exponent_data(curve.m, &tuple, curve.p())?;
            let not_ss = not_supersingular_test(&e);
            let not_p0 = matches!(curve.base, Base::P1) && not_prank0_test(&e);
            let (prank_zero, note) = match prank0_equations(curve, threads, max_terms) {
                Ok(sys) => (Some(sys.verdict), None),
                Err(Error::HypothesisViolated) => (
                    if not_p0 { Some(false) } else { None },
                    Some("orbit-sum hypothesis violated; equation system skipped".to_string()),
                ),
                Err(e) => return Err(e),
            };
            Ok(PrankVerdict {
                route: "criterion".into(),
                prank: None,
                prank_zero,
                supersingular: if not_ss { Some(false) } else { None },
                note,
            })
        }
    }
}

/// No two routes may contradict each other; None entries are inconclusive
/// and never count as disagreement.
pub fn routes_agree(verdicts: &[PrankVerdict]) -> bool {
    let pranks: Vec<u64> = verdicts.iter().filter_map(|v| v.prank).collect();
    if pranks.windows(2).any(|w| w[0] != w[1]) {
        return false;
    }
    let zeros: Vec<bool> = verdicts.iter().filter_map(|v| v.prank_zero).collect();
    if zeros.windows(2).any(|w| w[0] != w[1]) {
        return false;
    }
    if let (Some(&pr), Some(&z)) = (pranks.first(), zeros.first()) {
        if (pr == 0) != z {
            return false;
        }
    }
    let ss: Vec<bool> = verdicts.iter().filter_map(|v| v.supersingular).collect();
    if ss.windows(2).any(|w| w[0] != w[1]) {
        return false;
    }
    true
}
