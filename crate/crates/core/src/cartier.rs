//! Cartier-Manin matrices for hyperelliptic curves y^2 = f(x) in odd
//! characteristic: matrix construction from f^((p-1)/2), the genus-2
//! trace/determinant p-rank-0 test, the semilinear rank giving the exact
//! p-rank, and the cross-check of the matrix entries against direct
//! character-sum evaluations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{FieldSpec, FqElem, Tower};

// ---- dense polynomial helpers over F_q ----

fn fq_trim(field: &FieldSpec, v: &mut Vec<FqElem>) {
    while v.len() > 1 && field.is_zero(v.last().unwrap()) {
        v.pop();
    }
}

pub(crate) fn fq_poly_mul(field: &FieldSpec, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if field.is_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = field.add(&out[i + j], &field.mul(ai, bj));
        }
    }
    out
}

fn fq_poly_deriv(field: &FieldSpec, a: &[FqElem]) -> Vec<FqElem> {
    if a.len() <= 1 {
        return vec![field.zero()];
    }
    let mut out = Vec::with_capacity(a.len() - 1);
    for (i, ai) in a.iter().enumerate().skip(1) {
        out.push(field.mul_scalar(ai, (i as u64) % field.p));
    }
    fq_trim(field, &mut out);
    out
}

fn fq_poly_rem(field: &FieldSpec, a: &[FqElem], b: &[FqElem]) -> Result<Vec<FqElem>> {
    let mut r = a.to_vec();
    fq_trim(field, &mut r);
    let mut b = b.to_vec();
    fq_trim(field, &mut b);
    if b.len() == 1 && field.is_zero(&b[0]) {
        return Err(Error::DivideByZero);
    }
    let lead_inv = field.inv(b.last().unwrap())?;
    while r.len() >= b.len() && !(r.len() == 1 && field.is_zero(&r[0])) {
        let c = field.mul(r.last().unwrap(), &lead_inv);
        let shift = r.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            let t = field.mul(&c, bi);
            r[shift + i] = field.sub(&r[shift + i], &t);
        }
        fq_trim(field, &mut r);
        if field.is_zero(r.last().unwrap()) && r.len() == 1 {
            break;
        }
        if r.len() > shift + b.len() - 1 {
            // leading term must have cancelled
            r.truncate(shift + b.len() - 1);
            fq_trim(field, &mut r);
        }
    }
    Ok(r)
}

pub(crate) fn fq_poly_gcd(field: &FieldSpec, a: &[FqElem], b: &[FqElem]) -> Result<Vec<FqElem>> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fq_trim(field, &mut a);
    fq_trim(field, &mut b);
    while !(b.len() == 1 && field.is_zero(&b[0])) {
        let r = fq_poly_rem(field, &a, &b)?;
        a = b;
        b = r;
    }
    Ok(a)
}

// ---- Cartier-Manin matrix ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartierMatrix {
    pub field: FieldSpec,
    pub genus: u64,
    /// entries[i][j] = coefficient of x^{(i+1)p - (j+1)} in f^{(p-1)/2}
    pub entries: Vec<Vec<FqElem>>,
}

/// Cartier-Manin matrix of y^2 = f(x), f squarefree of degree 2g+1 or 2g+2.
pub fn cartier_matrix(field: &FieldSpec, f: &[FqElem]) -> Result<CartierMatrix> {
    let p = field.p;
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let mut f = f.to_vec();
    fq_trim(field, &mut f);
    let deg = f.len() - 1;
    if deg < 3 {
        return Err(Error::WrongShape(format!(
            "hyperelliptic model needs deg f >= 3, got {deg}"
        )));
    }
    let fp = fq_poly_deriv(field, &f);
    let g = fq_poly_gcd(field, &f, &fp)?;
    if g.len() != 1 {
        return Err(Error::NotSquarefree);
    }
    let genus = ((deg as u64) - 1) / 2;
    // f^((p-1)/2) by square-and-multiply on the exponent bits
    let e = (p - 1) / 2;
    let mut acc = vec![field.one()];
    let mut base = f.clone();
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            acc = fq_poly_mul(field, &acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = fq_poly_mul(field, &base, &base);
        }
    }
    let coeff = |n: u64| -> FqElem {
        acc.get(n as usize).cloned().unwrap_or_else(|| field.zero())
    };
    let mut entries = Vec::with_capacity(genus as usize);
    for i in 1..=genus {
        let mut row = Vec::with_capacity(genus as usize);
        for j in 1..=genus {
            if i * p < j {
                row.push(field.zero());
            } else {
                row.push(coeff(i * p - j));
            }
        }
        entries.push(row);
    }
    Ok(CartierMatrix { field: field.clone(), genus, entries })
}

/// Genus-2 closed form: p-rank 0 iff trace(A) = 0 and det-like invariant
/// a11*a22 - a12*a21 = 0.
pub fn genus2_prank0_test(a: &CartierMatrix) -> Result<bool> {
    if a.genus != 2 {
        return Err(Error::WrongGenus { expected: 2, got: a.genus as usize });
    }
    let f = &a.field;
    let tr = f.add(&a.entries[0][0], &a.entries[1][1]);
    let det = f.sub(
        &f.mul(&a.entries[0][0], &a.entries[1][1]),
        &f.mul(&a.entries[0][1], &a.entries[1][0]),
    );
    Ok(f.is_zero(&tr) && f.is_zero(&det))
}

fn rank(field: &FieldSpec, mat: &[Vec<FqElem>]) -> u64 {
    let mut m: Vec<Vec<FqElem>> = mat.to_vec();
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..cols {
        let Some(piv) = (row..rows).find(|&r| !field.is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(row, piv);
        let inv = field.inv(&m[row][col]).expect("pivot is nonzero");
        for c in col..cols {
            m[row][c] = field.mul(&m[row][c], &inv);
        }
        for r in 0..rows {
            if r != row && !field.is_zero(&m[r][col]) {
                let factor = m[r][col].clone();
                for c in col..cols {
                    let t = field.mul(&factor, &m[row][c]);
                    m[r][c] = field.sub(&m[r][c], &t);
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank as u64
}

fn frobenius_entrywise(field: &FieldSpec, mat: &[Vec<FqElem>], e: u64) -> Vec<Vec<FqElem>> {
    mat.iter()
        .map(|row| row.iter().map(|x| field.pow(x, e.into())).collect())
        .collect()
}

fn mat_mul(field: &FieldSpec, a: &[Vec<FqElem>], b: &[Vec<FqElem>]) -> Vec<Vec<FqElem>> {
    let n = a.len();
    let mut out = vec![vec![field.zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if field.is_zero(&a[i][k]) {
                continue;
            }
            for j in 0..n {
                let t = field.mul(&a[i][k], &b[k][j]);
                out[i][j] = field.add(&out[i][j], &t);
            }
        }
    }
    out
}

/// p-rank = stable rank of the semilinear iterates A, A A^(p), A A^(p) A^(p^2), ...
pub fn semilinear_prank(a: &CartierMatrix) -> u64 {
    let field = &a.field;
    let mut m = a.entries.clone();
    let mut twisted = a.entries.clone();
    let mut prev = rank(field, &m);
    for _ in 0..(a.genus as usize + 1) {
        twisted = frobenius_entrywise(field, &twisted, field.p);
        m = mat_mul(field, &m, &twisted);
        let r = rank(field, &m);
        if r == prev {
            return r;
        }
        prev = r;
    }
    prev
}

/// Cross-check of the genus-2 matrix invariants against direct power sums:
///   -(c_{p-1} + c_{2p-2})              = sum_{a in F_p} f(a)^{(p-1)/2}
///   c_{p-1} c_{2p-2} - c_{p-2} c_{2p-1} =
///     (1/2) [ sum_{x in F_{p^2}} (f(x) f(x)^p)^{(p-1)/2} + (first sum)^2 ]
/// for y^2 = f(x) with deg f = 5 over a prime field.
pub fn verify_eq_match(field: &FieldSpec, f: &[FqElem]) -> Result<bool> {
    if field.h != 1 {
        return Err(Error::WrongShape("prime field required".into()));
    }
    let p = field.p;
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let mut fv = f.to_vec();
    fq_trim(field, &mut fv);
    if fv.len() != 6 {
        return Err(Error::WrongShape(format!(
            "degree-5 model required, got degree {}",
            fv.len() - 1
        )));
    }
    let a = cartier_matrix(field, &fv)?;
    if a.genus != 2 {
        return Err(Error::WrongGenus { expected: 2, got: a.genus as usize });
    }
    let e = (p - 1) / 2;
    let eval = |spec: &FieldSpec, poly: &[FqElem], x: &FqElem| -> FqElem {
        let mut acc = spec.zero();
        for c in poly.iter().rev() {
            acc = spec.add(&spec.mul(&acc, x), c);
        }
        acc
    };
    // first sum over F_p
    let mut s1 = field.zero();
    for idx in 0..p {
        let x = field.elem_from_index(idx);
        let v = eval(field, &fv, &x);
        s1 = field.add(&s1, &field.pow(&v, e.into()));
    }
    // second sum over F_{p^2}
    let tower = Tower::new(field, 2)?;
    let femb: Vec<FqElem> = fv.iter().map(|c| tower.embed(c)).collect();
    let mut s2 = tower.top.zero();
    for idx in 0..tower.top.q() {
        let x = tower.top.elem_from_index(idx);
        let v = eval(&tower.top, &femb, &x);
        let w = tower.top.mul(&v, &tower.top.pow(&v, p.into()));
        s2 = tower.top.add(&s2, &tower.top.pow(&w, e.into()));
    }
    let s2 = tower.to_base(&s2).ok_or(Error::FieldMismatch)?;
    // eq (1): s1 = -(a11 + a22)
    let tr = field.add(&a.entries[0][0], &a.entries[1][1]);
    let eq1 = s1 == field.neg(&tr);
    // eq (2): (s2 + s1^2)/2 = a11 a22 - a12 a21
    let det = field.sub(
        &field.mul(&a.entries[0][0], &a.entries[1][1]),
        &field.mul(&a.entries[0][1], &a.entries[1][0]),
    );
    let half = field.inv(&field.from_int(2))?;
    let lhs = field.mul(&field.add(&s2, &field.mul(&s1, &s1)), &half);
    let eq2 = lhs == det;
    Ok(eq1 && eq2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charsum::{Base, CurveSpec};
    use crate::ff::make_field;
    use crate::zeta;

    fn expand_branch(field: &FieldSpec, xs: &[i64]) -> Vec<FqElem> {
        let mut f = vec![field.one()];
        for &x in xs {
            let r = field.from_int(x);
            let mut next = vec![field.zero(); f.len() + 1];
            for (i, c) in f.iter().enumerate() {
                next[i + 1] = field.add(&next[i + 1], c);
                next[i] = field.sub(&next[i], &field.mul(c, &r));
            }
            f = next;
        }
        f
    }

    #[test]
    fn power_sum_identity() {
        // sum_{a in F_p} a^s = -1 if (p-1) | s and s > 0, else 0
        let field = make_field(11, 1).unwrap();
        for s in 1u64..=20 {
            let mut acc = field.zero();
            for idx in 0..11 {
                let x = field.elem_from_index(idx);
                acc = field.add(&acc, &field.pow(&x, s.into()));
            }
            let expect = if s % 10 == 0 { field.from_int(-1) } else { field.zero() };
            assert_eq!(acc, expect, "s={s}");
        }
    }

    #[test]
    fn squarefree_detection() {
        let field = make_field(7, 1).unwrap();
        let f = expand_branch(&field, &[0, 1, 2]);
        assert!(cartier_matrix(&field, &f).is_ok());
        let g = expand_branch(&field, &[0, 0, 1]);
        assert!(matches!(cartier_matrix(&field, &g), Err(Error::NotSquarefree)));
        let field2 = make_field(2, 1).unwrap();
        let f2 = expand_branch(&field2, &[0, 1]);
        assert!(matches!(
            cartier_matrix(&field2, &f2),
            Err(Error::EvenCharacteristic)
        ));
    }

    #[test]
    fn elliptic_cartier_vs_oracle() {
        // genus 1: the 1x1 Cartier matrix entry is c_{p-1}; p-rank 0 iff it
        // vanishes, and this must match the oracle on every Legendre curve
        for p in [5u64, 7, 11, 13] {
            let field = make_field(p, 1).unwrap();
            for lam in 2..p as i64 {
                let f = expand_branch(&field, &[0, 1, lam]);
                let a = cartier_matrix(&field, &f).unwrap();
                assert_eq!(a.genus, 1);
                let rank = semilinear_prank(&a);
                let c = CurveSpec::new(
                    field.clone(),
                    2,
                    vec![1, 1, 1],
                    vec![field.zero(), field.one(), field.from_int(lam)],
                    Base::P1,
                )
                .unwrap();
                let pr = zeta::prank(&c, 1, 1 << 30).unwrap();
                assert_eq!(rank, pr, "p={p} lambda={lam}");
            }
        }
    }

    #[test]
    fn genus2_semilinear_vs_oracle_f7() {
        let field = make_field(7, 1).unwrap();
        let cases = [[0i64, 1, 2, 3, 4], [0, 1, 2, 3, 5], [0, 1, 2, 4, 6], [0, 2, 3, 5, 6]];
        for xs in cases {
            let f = expand_branch(&field, &xs);
            let a = cartier_matrix(&field, &f).unwrap();
            assert_eq!(a.genus, 2);
            let rank = semilinear_prank(&a);
            let branch = xs.iter().map(|&x| field.from_int(x)).collect();
            let c =
                CurveSpec::new(field.clone(), 2, vec![1; 5], branch, Base::P1).unwrap();
            let pr = zeta::prank(&c, 2, 1 << 30).unwrap();
            assert_eq!(rank, pr, "xs={xs:?}");
            assert_eq!(
                genus2_prank0_test(&a).unwrap(),
                pr == 0,
                "xs={xs:?}"
            );
        }
    }

    #[test]
    fn genus2_over_extension_field() {
        // semilinear rank over F_9 (non-prime field exercises the twist)
        let field = make_field(3, 2).unwrap();
        let xs: Vec<FqElem> = (0..5).map(|i| field.elem_from_index(i)).collect();
        let mut f = vec![field.one()];
        for x in &xs {
            let mut next = vec![field.zero(); f.len() + 1];
            for (i, c) in f.iter().enumerate() {
                next[i + 1] = field.add(&next[i + 1], c);
                next[i] = field.sub(&next[i], &field.mul(c, x));
            }
            f = next;
        }
        let a = cartier_matrix(&field, &f).unwrap();
        let rank = semilinear_prank(&a);
        let c = CurveSpec::new(field.clone(), 2, vec![1; 5], xs, Base::P1).unwrap();
        let pr = zeta::prank(&c, 2, 1 << 30).unwrap();
        assert_eq!(rank, pr);
    }

    #[test]
    fn eq_match_identities() {
        for p in [5u64, 7, 11] {
            let field = make_field(p, 1).unwrap();
            let mut checked = 0;
            'outer: for a in 2..p as i64 {
                for b in (a + 1)..p as i64 {
                    for c in (b + 1)..p as i64 {
                        if c as u64 >= p {
                            continue;
                        }
                        let f = expand_branch(&field, &[0, 1, a, b, c]);
                        assert!(
                            verify_eq_match(&field, &f).unwrap(),
                            "p={p} branch=(0,1,{a},{b},{c})"
                        );
                        checked += 1;
                        if checked >= 8 {
                            break 'outer;
                        }
                    }
                }
            }
            assert!(checked > 0);
        }
    }

    #[test]
    fn eq_match_shape_errors() {
        let field = make_field(7, 1).unwrap();
        let f = expand_branch(&field, &[0, 1, 2]);
        assert!(matches!(
            verify_eq_match(&field, &f),
            Err(Error::WrongShape(_))
        ));
        let field9 = make_field(3, 2).unwrap();
        let f9: Vec<FqElem> = vec![field9.one(); 6];
        assert!(matches!(
            verify_eq_match(&field9, &f9),
            Err(Error::WrongShape(_))
        ));
    }
}
