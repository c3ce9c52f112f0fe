//! PGL2 symmetric-power toolkit: the polynomials `H_u`, their
//! Chebyshev/orthogonality identities, semicircle moments, the Jacobi–Trudi
//! determinant check, and the `Sym^u` CLT experiment.
//!
//! `H_u` satisfies `H_0 = 1`, `H_1 = x`, `H_{u+2} = x·H_{u+1} − H_u`; it is
//! the Chebyshev polynomial of the second kind rescaled to `[-2, 2]` and the
//! A1 Weyl character in disguise, which is what `sympow_clt` leans on.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::characters::CharExpansion;
use crate::clt::{simulate_family, CLTReport, FamilyConfig, SamplingMode, TestFunction};
use crate::error::{Error, Result};
use crate::measures::TorusQuadrature;
use crate::root_systems::{build_root_system, Family, GroupType, Weight};

pub const MAX_H_DEGREE: u32 = 200;

/// Dense integer polynomial, ascending degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation in `f64`.
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().expect("coefficient fits f64");
        }
        acc
    }

    /// Exact rational evaluation.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    /// Evaluation at an `f64` point through exact rational arithmetic
    /// (every `f64` is rational), rounded once at the end. Plain `f64`
    /// Horner cancels catastrophically for high-degree `H_u` near the
    /// interval ends; this stays exact.
    pub fn eval_exact(&self, x: f64) -> f64 {
        let xr = BigRational::from_float(x).expect("finite x");
        self.eval_rational(&xr).to_f64().expect("value fits f64")
    }
}

/// `H_u` by the three-term recurrence, exact integer coefficients.
pub fn h_polynomial(u: u32) -> Result<IntPolynomial> {
    if u > MAX_H_DEGREE {
        return Err(Error::InvalidParameter(format!(
            "H_u supported for u <= {MAX_H_DEGREE}, got {u}"
        )));
    }
    let mut prev = vec![BigInt::one()]; // H_0
    if u == 0 {
        return Ok(IntPolynomial::new(prev));
    }
    let mut cur = vec![BigInt::zero(), BigInt::one()]; // H_1 = x
    for _ in 2..=u {
        // next = x·cur − prev
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    Ok(IntPolynomial::new(cur))
}

/// `H_u(x)` as the `u×u` tridiagonal determinant with `x` on the diagonal
/// and 1 off it, evaluated by the minor recurrence.
pub fn h_via_determinant(u: u32, x: f64) -> Result<f64> {
    if u > MAX_H_DEGREE {
        return Err(Error::InvalidParameter(format!(
            "determinant evaluation supported for u <= {MAX_H_DEGREE}, got {u}"
        )));
    }
    let mut d_prev = 1.0; // empty determinant
    let mut d = x; // 1×1
    if u == 0 {
        return Ok(1.0);
    }
    for _ in 2..=u {
        let next = x * d - d_prev;
        d_prev = d;
        d = next;
    }
    Ok(d)
}

/// Both sides of `H_u(2cosθ) = sin((u+1)θ)/sinθ`.
pub fn chebyshev_check(u: u32, theta: f64) -> Result<(f64, f64)> {
    if theta.sin().abs() <= 1e-6 {
        return Err(Error::InvalidParameter(format!(
            "theta = {theta} too close to a singular angle"
        )));
    }
    let lhs = h_polynomial(u)?.eval_exact(2.0 * theta.cos());
    let rhs = ((u as f64 + 1.0) * theta).sin() / theta.sin();
    Ok((lhs, rhs))
}

/// `∫ x^{2u} μ^ST = (2u)!/((u+1)! u!)` — the `u`-th Catalan number, exact.
pub fn semicircle_moment(u: u32) -> Result<BigRational> {
    if u > 30 {
        return Err(Error::InvalidParameter(format!(
            "semicircle moments supported for u <= 30, got {u}"
        )));
    }
    let fact = |m: u32| -> BigInt { (1..=m).map(BigInt::from).product() };
    Ok(Ratio::new(fact(2 * u), fact(u + 1) * fact(u)))
}

/// `∫ f dμ^ST` on `[-2, 2]` with the semicircle weight, via `x = 2cosθ`:
/// the integrand becomes the band-limited `f(2cosθ)·2sin²θ` and the torus
/// trapezoid rule is exact. `band` is the degree of `f`.
pub fn semicircle_integral(f: impl Fn(f64) -> f64 + Sync, band: u32) -> Result<f64> {
    let q = TorusQuadrature::<f64>::for_band2(1, 2 * (band as i64 + 2))?;
    Ok(q
        .integrate(|t| {
            let th = t.thetas()[0];
            num_complex::Complex::new(f(2.0 * th.cos()) * 2.0 * th.sin() * th.sin(), 0.0)
        })
        .re)
}

/// `∫ H_u H_v dμ^ST`, equal to `δ_{uv}` within quadrature rounding.
///
/// Values come from the determinant (three-term) recurrence, which is
/// forward-stable on `[-2, 2]`, unlike monomial-basis Horner.
pub fn h_orthonormality(u: u32, v: u32) -> Result<f64> {
    if u > 60 || v > 60 {
        return Err(Error::InvalidParameter(format!(
            "orthonormality check supported for u, v <= 60, got ({u}, {v})"
        )));
    }
    semicircle_integral(
        |x| h_via_determinant(u, x).unwrap() * h_via_determinant(v, x).unwrap(),
        u + v,
    )
}

/// Sparse multivariate integer polynomial: exponent vector → coefficient.
type MultiPoly = BTreeMap<Vec<u8>, BigInt>;

fn mp_add(a: &mut MultiPoly, mono: Vec<u8>, c: BigInt) {
    use std::collections::btree_map::Entry;
    match a.entry(mono) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn mp_mul(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let mut out = MultiPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mono: Vec<u8> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            mp_add(&mut out, mono, ca * cb);
        }
    }
    out
}

/// Elementary symmetric polynomial `e_k(x_1..x_n)`.
fn elementary(n: usize, k: usize) -> MultiPoly {
    fn rec(out: &mut MultiPoly, mono: &mut Vec<u8>, start: usize, left: usize) {
        if left == 0 {
            out.insert(mono.clone(), BigInt::one());
            return;
        }
        for i in start..mono.len() {
            if mono.len() - i < left {
                break;
            }
            mono[i] = 1;
            rec(out, mono, i + 1, left - 1);
            mono[i] = 0;
        }
    }
    let mut out = MultiPoly::new();
    if k <= n {
        rec(&mut out, &mut vec![0u8; n], 0, k);
    }
    out
}

/// Complete homogeneous symmetric polynomial `h_u(x_1..x_n)`.
fn complete_homogeneous(n: usize, u: usize) -> MultiPoly {
    let mut out = MultiPoly::new();
    let mut mono = vec![0u8; n];
    fn rec(out: &mut MultiPoly, mono: &mut Vec<u8>, var: usize, left: usize) {
        let n = mono.len();
        if var == n - 1 {
            mono[var] = left as u8;
            out.insert(mono.clone(), BigInt::one());
            mono[var] = 0;
            return;
        }
        for d in 0..=left {
            mono[var] = d as u8;
            rec(out, mono, var + 1, left - d);
        }
        mono[var] = 0;
    }
    if n == 0 {
        if u == 0 {
            out.insert(vec![], BigInt::one());
        }
        return out;
    }
    rec(&mut out, &mut mono, 0, u);
    out
}

/// Determinant of a matrix of multivariate polynomials by permutation
/// expansion (sizes are tiny).
fn mp_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    let mut out = MultiPoly::new();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1i32;
    // Heap's algorithm, tracking parity.
    let mut c = vec![0usize; n];
    let emit = |perm: &[usize], sign: i32, out: &mut MultiPoly| {
        // product of the selected entries, row by row
        let mut acc: Option<MultiPoly> = None;
        for (i, &j) in perm.iter().enumerate() {
            let cell = &m[i][j];
            if cell.is_empty() {
                return;
            }
            acc = Some(match acc {
                None => cell.clone(),
                Some(a) => mp_mul(&a, cell),
            });
        }
        if let Some(a) = acc {
            for (mono, coeff) in a {
                mp_add(out, mono, coeff * BigInt::from(sign));
            }
        }
    };
    emit(&perm, sign, &mut out);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            emit(&perm, sign, &mut out);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Exact check of `h_u = det(e_{1−i+j})_{1≤i,j≤u}` in `n` variables.
pub fn jacobi_trudi_check(n: usize, u: usize) -> Result<bool> {
    if n > 5 || u > 6 {
        return Err(Error::InvalidParameter(format!(
            "jacobi_trudi_check supported for n <= 5, u <= 6, got ({n}, {u})"
        )));
    }
    if u == 0 {
        return Ok(true); // empty determinant = 1 = h_0
    }
    let e = |k: i64| -> MultiPoly {
        if k < 0 {
            MultiPoly::new()
        } else if k == 0 {
            let mut one = MultiPoly::new();
            one.insert(vec![0u8; n], BigInt::one());
            one
        } else {
            elementary(n, k as usize)
        }
    };
    let m: Vec<Vec<MultiPoly>> = (1..=u)
        .map(|i| (1..=u).map(|j| e(1 - i as i64 + j as i64)).collect())
        .collect();
    let det = mp_det(&m);
    let h = complete_homogeneous(n, u);
    Ok(det == h)
}

/// `Sym^u` CLT experiment: `a_p` drawn i.i.d. from the A1 Sato-Tate
/// (semicircle) measure, `S = Σ_{p≤x} H_u(a_p)/√π(x)`. Implemented as the
/// generic family simulation on A1 with `ĥ = χ_{u·ω}`, which is the same
/// function by the Chebyshev identity.
pub fn sympow_clt(u: u32, x: u64, family_size: usize, seed: u64) -> Result<CLTReport> {
    if u == 0 {
        return Err(Error::InvalidParameter("sympow_clt needs u >= 1".into()));
    }
    let a1 = build_root_system(GroupType::new(Family::A, 1)?)?;
    let lam = Weight::from_ints(&[u as i64]);
    let test_fn = TestFunction::self_dual(&a1, CharExpansion::single(&a1, lam)?)?;
    let cfg = FamilyConfig {
        group: a1.group_type(),
        test_fn,
        x,
        family_size,
        sampling: SamplingMode::SatoTateOnly,
        seed,
    };
    simulate_family(&a1, &cfg)
}
