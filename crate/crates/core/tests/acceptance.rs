//! Acceptance gate: ten exact criteria, one pass/fail line each.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jacrank::cartier;
use jacrank::charsum::{self, Base, CurveSpec};
use jacrank::criteria::{self, Route};
use jacrank::ff::{make_field, FieldSpec, FqElem};
use jacrank::zeta;

const MAX_TERMS: u128 = 5_000_000;
const THREADS: usize = 4;

fn report(n: usize, desc: &str, ok: bool) {
    println!("criterion {n}: {} — {desc}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {desc}");
}

fn p1_curve(field: &FieldSpec, m: u64, a: &[u64], xs: &[FqElem]) -> CurveSpec {
    CurveSpec::new(field.clone(), m, a.to_vec(), xs.to_vec(), Base::P1).unwrap()
}

fn expand(field: &FieldSpec, xs: &[FqElem]) -> Vec<FqElem> {
    let mut f = vec![field.one()];
    for x in xs {
        let mut next = vec![field.zero(); f.len() + 1];
        for (i, c) in f.iter().enumerate() {
            next[i + 1] = field.add(&next[i + 1], c);
            next[i] = field.sub(&next[i], &field.mul(c, x));
        }
        f = next;
    }
    f
}

/// all length-d tuples over 1..m with coordinate sum not divisible by m
fn tuples(m: u64, d: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![1u64; d];
    loop {
        if cur.iter().sum::<u64>() % m != 0 {
            out.push(cur.clone());
        }
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < m {
                break;
            }
            cur[i] = 1;
        }
    }
}

#[test]
fn criterion_01_f7_example() {
    let field = make_field(7, 1).unwrap();
    let mut ok = true;
    for alpha in 2..7i64 {
        let c = p1_curve(
            &field,
            3,
            &[1, 1, 2],
            &[field.zero(), field.one(), field.from_int(alpha)],
        );
        let pr = zeta::prank(&c, THREADS, MAX_TERMS).unwrap();
        ok &= pr >= 1;
        // split criterion: some character sum must be nonzero mod the prime
        let sys = criteria::prank0_equations(&c, THREADS, MAX_TERMS).unwrap();
        ok &= !sys.inert;
        ok &= sys.satisfied.iter().any(|&s| !s);
        let verdicts = [
            criteria::run_route(&c, Route::Criterion, THREADS, MAX_TERMS).unwrap(),
            criteria::run_route(&c, Route::Oracle, THREADS, MAX_TERMS).unwrap(),
        ];
        ok &= criteria::routes_agree(&verdicts);
    }
    report(1, "y^3 = x(x-1)(x-a)^2 over F_7 has 7-rank >= 1 for all a, routes agree", ok);
}

#[test]
fn criterion_02_deuring_consistency() {
    let mut ok = true;
    for p in [5u64, 7, 11, 13] {
        let d = criteria::deuring(p).unwrap();
        let field = &d.field;
        for idx in 0..field.q() {
            let lam = field.elem_from_index(idx);
            if field.is_zero(&lam) || lam == field.one() {
                continue;
            }
            let c = p1_curve(
                field,
                2,
                &[1, 1, 1],
                &[field.zero(), field.one(), lam.clone()],
            );
            let z = zeta::zeta_numerator(&c, THREADS, MAX_TERMS).unwrap();
            ok &= z.supersingular == d.roots.contains(&lam);
            if !ok {
                break;
            }
        }
    }
    report(2, "roots of H(lambda) in F_{p^2} are exactly the supersingular Legendre parameters, p in {5,7,11,13}", ok);
}

#[test]
fn criterion_03_stickelberger_factorization() {
    let mut ok = true;
    let mut checked = 0usize;
    for m in [3u64, 5] {
        for p in [7u64, 11, 13, 31, 2, 3, 5, 17] {
            if p == m {
                continue;
            }
            for d in 2..=4usize {
                for a in tuples(m, d) {
                    ok &= criteria::stickelberger_check(m, &a, p).unwrap();
                    checked += 1;
                    assert!(ok, "m={m} p={p} a={a:?}");
                }
            }
        }
    }
    report(
        3,
        &format!("valuation multisets of J_(a) above p match theta(a) on {checked} instances"),
        ok && checked > 2000,
    );
}

#[test]
fn criterion_04_absolute_value() {
    let mut ok = true;
    let mut checked = 0usize;
    for m in [3u64, 5] {
        for p in [7u64, 11, 13, 31, 2, 3, 5, 17] {
            if p == m {
                continue;
            }
            let e0 = criteria::exponent_data(m, &[1], p).unwrap();
            let field = make_field(p, e0.h).unwrap();
            let ct = charsum::CharTable::new(&field, m).unwrap();
            for d in 2..=4usize {
                for a in tuples(m, d) {
                    let j = charsum::jacobi_sum_with(&ct, &a).unwrap();
                    let q = field.q() as i128;
                    let expect = q.pow(d as u32 - 1);
                    ok &= j.abs_square() == Some(expect);
                    checked += 1;
                    assert!(ok, "m={m} p={p} a={a:?}");
                }
            }
        }
    }
    report(
        4,
        &format!("|J_(a)|^2 = q^(d-1) on {checked} instances"),
        ok && checked > 2000,
    );
}

/// the g = 0 instance list shared by criteria 5 and 6
fn genus0_instances() -> Vec<CurveSpec> {
    let mut out = Vec::new();
    // (m, p, h, tuples over branch (x_1..x_d) = first d suitable elements)
    let shapes: &[(u64, u64, usize, &[&[u64]])] = &[
        (3, 7, 1, &[&[1, 1, 1], &[1, 1, 2], &[1, 2, 2], &[1, 1, 1, 2], &[1, 2, 1, 2]]),
        (3, 13, 1, &[&[1, 1, 1], &[1, 1, 2], &[2, 2, 1, 1]]),
        (3, 5, 2, &[&[1, 1, 2], &[1, 1, 1, 1]]),
        (3, 7, 2, &[&[1, 1, 1], &[1, 2, 2, 2]]),
        (5, 11, 1, &[&[1, 1, 1], &[1, 2, 3], &[1, 1, 3], &[2, 3, 4], &[1, 1, 1, 2]]),
        (5, 31, 1, &[&[1, 2, 3], &[1, 4, 4]]),
        (5, 41, 1, &[&[1, 1, 1], &[2, 2, 3]]),
    ];
    for &(m, p, h, tups) in shapes {
        let field = make_field(p, h).unwrap();
        for a in tups {
            let branch: Vec<FqElem> =
                (0..a.len() as u64).map(|i| field.elem_from_index(i)).collect();
            out.push(p1_curve(&field, m, a, &branch));
        }
    }
    out
}

fn elliptic_base_curve(p: u64) -> CurveSpec {
    // cover y^2 = y0 of the elliptic curve y0^2 = x(x-1)(x-2)
    let field = make_field(p, 1).unwrap();
    let xs = [field.zero(), field.one(), field.from_int(2)];
    let f0 = expand(&field, &xs);
    CurveSpec::new(
        field.clone(),
        2,
        vec![1, 1, 1],
        xs.to_vec(),
        Base::Superelliptic { m0: 2, f0 },
    )
    .unwrap()
}

#[test]
fn criterion_05_constant_term() {
    let mut ok = true;
    let mut n = 0usize;
    for c in genus0_instances() {
        ok &= charsum::verify_constant_term(&c, THREADS, MAX_TERMS).is_ok();
        n += 1;
        assert!(ok, "g=0 instance {n} (m={}, q={})", c.m, c.q());
    }
    for p in [5u64, 7] {
        let c = elliptic_base_curve(p);
        ok &= charsum::verify_constant_term(&c, THREADS, MAX_TERMS).is_ok();
        n += 1;
        assert!(ok, "elliptic-base instance p={p}");
    }
    report(
        5,
        &format!("P(0) = unit * q^g * J_(a) verified on {n} instances (incl. elliptic base)"),
        ok && n >= 22,
    );
}

#[test]
fn criterion_06_oracle_equivalence() {
    let mut ok = true;
    let mut n = 0usize;
    for c in genus0_instances() {
        let prod = charsum::l_polynomial_product(&c, THREADS, MAX_TERMS).unwrap();
        let rev: Vec<i128> = prod.iter().rev().cloned().collect();
        let z = zeta::zeta_numerator(&c, THREADS, MAX_TERMS).unwrap();
        ok &= rev == z.l_coeffs;
        n += 1;
        assert!(ok, "instance {n} (m={}, q={}, a={:?})", c.m, c.q(), c.exponents);
    }
    report(
        6,
        &format!("reversed prod_j P^(chi^j) equals the oracle zeta numerator on {n} g=0 instances"),
        ok && n >= 20,
    );
}

#[test]
fn criterion_07_inert_equivalence() {
    let mut ok = true;
    let mut n = 0usize;
    for p in [2u64, 5] {
        let field = make_field(p, 2).unwrap();
        for a in [1u64, 2] {
            for idx in 0..field.q() {
                let alpha = field.elem_from_index(idx);
                if field.is_zero(&alpha) || alpha == field.one() {
                    continue;
                }
                let c = p1_curve(
                    &field,
                    3,
                    &[1, 1, a],
                    &[field.zero(), field.one(), alpha.clone()],
                );
                let sys = criteria::prank0_equations(&c, THREADS, MAX_TERMS).unwrap();
                ok &= sys.inert;
                let pr = zeta::prank(&c, THREADS, MAX_TERMS).unwrap();
                ok &= sys.verdict == (pr == 0);
                n += 1;
                assert!(ok, "p={p} a={a} alpha index {idx}");
            }
        }
    }
    report(
        7,
        &format!("inert equation-system verdict = oracle p-rank-0 verdict on {n} exhaustive instances"),
        ok && n >= 50,
    );
}

#[test]
fn criterion_08_genus2_match() {
    let mut ok = true;
    let mut n = 0usize;
    let mut run_one = |field: &FieldSpec, xs: &[FqElem]| {
        let f = expand(field, xs);
        ok &= cartier::verify_eq_match(field, &f).unwrap();
        let a = cartier::cartier_matrix(field, &f).unwrap();
        let c = p1_curve(field, 2, &[1; 5], xs);
        let pr = zeta::prank(&c, THREADS, MAX_TERMS).unwrap();
        ok &= cartier::genus2_prank0_test(&a).unwrap() == (pr == 0);
        n += 1;
        assert!(ok, "q={} branch {:?}", field.q(), xs);
    };
    // exhaustive distinct triples (a1,a2,a3) completing x(x-1) over F_5
    let f5 = make_field(5, 1).unwrap();
    for a1 in 0..5u64 {
        for a2 in (a1 + 1)..5 {
            for a3 in (a2 + 1)..5 {
                let xs: Vec<FqElem> = {
                    let mut v = vec![f5.zero(), f5.one()];
                    v.extend([a1, a2, a3].map(|i| f5.elem_from_index(i)));
                    v
                };
                let mut sorted: Vec<u64> = xs.iter().map(|x| f5.index_of(x)).collect();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != 5 {
                    continue;
                }
                run_one(&f5, &xs);
            }
        }
    }
    // 50 seeded-random distinct 5-tuples over each of F_7, F_11
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for p in [7u64, 11] {
        let field = make_field(p, 1).unwrap();
        let mut done = 0;
        while done < 50 {
            let mut idxs: Vec<u64> = (0..5).map(|_| rng.gen_range(0..p)).collect();
            idxs.sort_unstable();
            idxs.dedup();
            if idxs.len() != 5 {
                continue;
            }
            let xs: Vec<FqElem> = idxs.iter().map(|&i| field.elem_from_index(i)).collect();
            run_one(&field, &xs);
            done += 1;
        }
    }
    report(
        8,
        &format!("genus-2 matrix identities and p-rank-0 test vs oracle on {n} curves"),
        ok && n >= 100,
    );
}

#[test]
fn criterion_09_thm65_soundness() {
    let mut ok = true;
    let mut n = 0usize;
    let mut certified = 0usize;
    let shapes: &[(u64, u64, &[&[u64]])] = &[
        (3, 7, &[&[1, 1, 1], &[1, 1, 2], &[1, 2, 2], &[2, 2, 2]]),
        (3, 13, &[&[1, 1, 1], &[1, 1, 2], &[1, 2, 2], &[2, 2, 2]]),
        (5, 11, &[&[1, 1, 1], &[1, 2, 3], &[1, 1, 3], &[2, 3, 4]]),
    ];
    for &(m, p, tups) in shapes {
        let field = make_field(p, 1).unwrap();
        for a in tups {
            for alpha in 2..p as i64 {
                let c = p1_curve(
                    &field,
                    m,
                    a,
                    &[field.zero(), field.one(), field.from_int(alpha)],
                );
                let tuple: Vec<u64> = if c.infinity_in_t() {
                    c.exponents.clone()
                } else {
                    c.exponents[1..].to_vec()
                };
                let e = criteria::exponent_data(m, &tuple, p).unwrap();
                let cert_ss = criteria::not_supersingular_test(&e);
                let cert_p0 = criteria::not_prank0_test(&e);
                n += 1;
                if !cert_ss && !cert_p0 {
                    continue;
                }
                certified += 1;
                let z = zeta::zeta_numerator(&c, THREADS, MAX_TERMS).unwrap();
                if cert_ss {
                    ok &= !z.supersingular;
                }
                if cert_p0 {
                    ok &= z.prank > 0;
                }
                assert!(ok, "m={m} p={p} a={a:?} alpha={alpha}");
            }
        }
    }
    report(
        9,
        &format!("no false certificates among {certified} certified of {n} scanned instances"),
        ok && n >= 100 && certified > 0,
    );
}

#[test]
fn criterion_10_structural_invariants() {
    let mut ok = true;
    let field7 = make_field(7, 1).unwrap();
    let curves = [
        p1_curve(&field7, 3, &[1, 1, 2], &[field7.zero(), field7.one(), field7.from_int(3)]),
        p1_curve(&field7, 2, &[1; 5], &(0..5).map(|i| field7.elem_from_index(i)).collect::<Vec<_>>()),
    ];
    for c in &curves {
        // functional-equation symmetry of the oracle numerator
        let z = zeta::zeta_numerator(c, THREADS, MAX_TERMS).unwrap();
        let deg = z.l_coeffs.len() - 1;
        let q = c.q() as i128;
        // c_{deg-i} = q^{g-i} c_i with deg = 2g
        let g = deg / 2;
        for i in 0..=g {
            let mut qp: i128 = 1;
            for _ in i..g {
                qp *= q;
            }
            ok &= z.l_coeffs[deg - i] == qp * z.l_coeffs[i];
        }
        // sum_u d_u = genus for g = 0 base
        let tuple: Vec<u64> = if c.infinity_in_t() {
            c.exponents.clone()
        } else {
            c.exponents[1..].to_vec()
        };
        let e = criteria::exponent_data(c.m, &tuple, c.p()).unwrap();
        ok &= e.d_u[1..].iter().sum::<u64>() == c.genus_cover();
        // Galois equivariance: P^(chi^j) = sigma_j P^(chi) coefficientwise
        let base = charsum::l_polynomial(c, 1, THREADS, MAX_TERMS).unwrap();
        for j in 2..c.m {
            let lj = charsum::l_polynomial(c, j, THREADS, MAX_TERMS).unwrap();
            for (a, b) in lj.coeffs.iter().zip(base.coeffs.iter()) {
                ok &= *a == b.galois(j).unwrap();
            }
        }
        // determinism under thread-count variation
        let z1 = zeta::zeta_numerator(c, 1, MAX_TERMS).unwrap();
        let z3 = zeta::zeta_numerator(c, 3, MAX_TERMS).unwrap();
        let z8 = zeta::zeta_numerator(c, 8, MAX_TERMS).unwrap();
        ok &= z1 == z3 && z3 == z8;
        let l1 = charsum::l_polynomial(c, 1, 1, MAX_TERMS).unwrap();
        let l5 = charsum::l_polynomial(c, 1, 5, MAX_TERMS).unwrap();
        ok &= l1 == l5;
    }
    // Weil-reciprocity agreement of the two f(D) evaluation routes
    for q in [5u64, 7] {
        let field = make_field(q, 1).unwrap();
        let c = p1_curve(
            &field,
            2,
            &[1, 1, 1],
            &[field.zero(), field.one(), field.from_int(2)],
        );
        let pts = zeta::closed_points(&c, 2, MAX_TERMS).unwrap();
        for (pi, pt) in pts.points.iter().enumerate() {
            if pt.in_t || pt.infinite || pt.degree != 1 {
                continue;
            }
            // minimal polynomial of the degree-1 closed point
            let x = pt.x.clone().unwrap();
            let minpoly = vec![field.neg(&x), field.one()];
            let via_norm = charsum::f_of_divisor(&c, &pts, &[(pi, 1)]).unwrap();
            let via_weil = charsum::f_of_monic_divisor(&c, &minpoly).unwrap();
            ok &= via_norm == via_weil;
        }
    }
    report(10, "functional equation, sum d_u = genus, Weil reciprocity, Galois equivariance, thread determinism", ok);
}
