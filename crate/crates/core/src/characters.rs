//! Irreducible characters on the compact torus.
//!
//! Characters are evaluated through the Weyl quotient `δ^{-1} Σ_w ε(w)
//! e^{w(λ+ρ)}` away from the singular set, with an exact
//! weight-multiplicity fallback (Freudenthal recursion) near it. The same
//! multiplicity tables drive the unitriangular monomial-to-character basis
//! change, all in integer arithmetic.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::root_systems::{RootSystem, Weight, WeylElement};
use crate::scalar::{cast, cast_i64, Real};

/// Default cap on the dimension of a representation whose weight
/// multiplicities we are willing to tabulate.
pub const DEFAULT_DIMENSION_BOUND: u128 = 1_000_000;

/// Point of the compact torus, one angle per rank dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint<F: Real> {
    thetas: Vec<F>,
}

impl<F: Real> TorusPoint<F> {
    /// Angles are reduced to `[0, 2π)` on construction.
    pub fn new(thetas: Vec<F>) -> Self {
        let two_pi = F::TAU();
        let reduced = thetas
            .into_iter()
            .map(|t| {
                let mut r = t % two_pi;
                if r < F::zero() {
                    r += two_pi;
                }
                r
            })
            .collect();
        TorusPoint { thetas: reduced }
    }

    /// Internal constructor that keeps the raw angles. Quadrature grids use
    /// this to stay on the double cover needed for half-integral weights.
    pub(crate) fn from_raw(thetas: Vec<F>) -> Self {
        TorusPoint { thetas }
    }

    pub fn thetas(&self) -> &[F] {
        &self.thetas
    }

    pub fn rank(&self) -> usize {
        self.thetas.len()
    }

    /// `e^λ(t) = exp(i ⟨λ, θ⟩)`.
    pub fn exponential(&self, lam: &Weight) -> Complex<F> {
        let mut phase = F::zero();
        for (&c2, &th) in lam.coords2().iter().zip(&self.thetas) {
            phase += cast_i64::<F>(c2) * th;
        }
        phase = phase * cast::<F>(0.5);
        Complex::new(phase.cos(), phase.sin())
    }
}

/// Transports a torus point by a Weyl element so that
/// `e^λ(w⋆t) = e^{wλ}(t)`; every W-invariant function is unchanged.
pub fn weyl_transport_angles<F: Real>(w: &WeylElement, t: &TorusPoint<F>) -> TorusPoint<F> {
    let r = t.rank();
    let mat2 = w.mat2();
    let half = cast::<F>(0.5);
    let thetas = (0..r)
        .map(|j| {
            let mut acc = F::zero();
            for i in 0..r {
                acc += cast_i64::<F>(mat2[i * r + j]) * t.thetas[i];
            }
            acc * half
        })
        .collect();
    TorusPoint::from_raw(thetas)
}

/// `δ(t) = Σ_w ε(w) e^{w(ρ)}(t)`, zero at singular points.
pub fn weyl_denominator<F: Real>(rs: &RootSystem, t: &TorusPoint<F>) -> Complex<F> {
    alternating_sum(rs, rs.rho(), t)
}

/// Numerator form `χ_λ·δ = Σ_w ε(w) e^{w(λ+ρ)}` — a trigonometric
/// polynomial, safe at singular points. Quadrature inner products are built
/// from these.
pub fn char_numerator<F: Real>(rs: &RootSystem, lam: &Weight, t: &TorusPoint<F>) -> Complex<F> {
    alternating_sum(rs, &lam.add(rs.rho()), t)
}

fn alternating_sum<F: Real>(rs: &RootSystem, shifted: &Weight, t: &TorusPoint<F>) -> Complex<F> {
    let mut acc = Complex::<F>::zero();
    for w in rs.weyl_elements() {
        let term = t.exponential(&w.apply(shifted));
        if w.sign() > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Irreducible character `χ_λ(t)`.
///
/// Uses the Weyl quotient when `|δ(t)|` clears the singularity threshold
/// `1e-6·|W|`, otherwise the exact multiplicity sum.
pub fn char_value<F: Real>(rs: &RootSystem, lam: &Weight, t: &TorusPoint<F>) -> Result<Complex<F>> {
    if !rs.is_dominant(lam) {
        return Err(Error::NonDominant(lam.coords2().to_vec()));
    }
    rs.check_in_lattice(lam)?;
    let delta = weyl_denominator(rs, t);
    let threshold = cast::<F>(1e-6) * cast::<F>(rs.weyl_order() as f64);
    if delta.norm() > threshold {
        let shifted = lam.add(rs.rho());
        Ok(alternating_sum(rs, &shifted, t) / delta)
    } else {
        let table = weight_multiplicities(rs, lam)?;
        Ok(table.evaluate(t))
    }
}

/// Weight multiplicity table of the irreducible with highest weight `λ`.
#[derive(Debug, Clone)]
pub struct WeightMultiplicityTable {
    highest: Weight,
    /// Full W-invariant table, every weight of the representation.
    entries: BTreeMap<Weight, u64>,
    dimension: u128,
}

impl WeightMultiplicityTable {
    pub fn highest(&self) -> &Weight {
        &self.highest
    }

    pub fn entries(&self) -> &BTreeMap<Weight, u64> {
        &self.entries
    }

    pub fn multiplicity(&self, mu: &Weight) -> u64 {
        self.entries.get(mu).copied().unwrap_or(0)
    }

    pub fn dimension(&self) -> u128 {
        self.dimension
    }

    /// `Σ_μ mult(μ) e^{iμθ}` — the character as a plain Fourier sum.
    pub fn evaluate<F: Real>(&self, t: &TorusPoint<F>) -> Complex<F> {
        let mut acc = Complex::<F>::zero();
        for (mu, &m) in &self.entries {
            acc += t.exponential(mu) * cast::<F>(m as f64);
        }
        acc
    }
}

/// Exact dimension of `π_λ` by the Weyl dimension formula.
pub fn weyl_dimension(rs: &RootSystem, lam: &Weight) -> Result<u128> {
    if !rs.is_dominant(lam) {
        return Err(Error::NonDominant(lam.coords2().to_vec()));
    }
    let shifted = lam.add(rs.rho());
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for cv in rs.positive_coroots() {
        num *= BigInt::from(cv.pair(&shifted));
        den *= BigInt::from(cv.pair(rs.rho()));
    }
    let q = Ratio::new(num, den);
    assert!(q.is_integer(), "Weyl dimension is integral");
    let d = q.to_integer();
    d.try_into()
        .map_err(|_| Error::DimensionBound {
            dim: u128::MAX,
            bound: u128::MAX,
        })
}

/// Dominant weights `μ ⪯ λ` in `λ + Q`, sorted by increasing height of
/// `λ - μ` (so `λ` itself comes first). Exact enumeration over the
/// simple-root coefficient box.
fn dominant_weights_below(rs: &RootSystem, lam: &Weight) -> Vec<Weight> {
    let rank = rs.rank();
    let bounds: Vec<i64> = rs
        .simple_root_coeffs(lam)
        .iter()
        .map(|c| (c.numer().div_euclid(*c.denom())).max(0))
        .collect();
    let mut out: Vec<(i64, Weight)> = Vec::new();
    let mut c = vec![0i64; rank];
    loop {
        let mut mu = lam.clone();
        for (i, &ci) in c.iter().enumerate() {
            if ci != 0 {
                mu = mu.sub(&rs.simple_roots()[i].scale(ci));
            }
        }
        if rs.is_dominant(&mu) {
            out.push((c.iter().sum(), mu));
        }
        // advance the counter
        let mut i = 0;
        loop {
            if i == rank {
                out.sort();
                return out.into_iter().map(|(_, w)| w).collect();
            }
            c[i] += 1;
            if c[i] <= bounds[i] {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

/// Freudenthal recursion for all weight multiplicities of `π_λ`, memoized
/// per root system. Errors if the dimension exceeds the configured bound.
pub fn weight_multiplicities(rs: &RootSystem, lam: &Weight) -> Result<Arc<WeightMultiplicityTable>> {
    weight_multiplicities_with_bound(rs, lam, DEFAULT_DIMENSION_BOUND)
}

pub fn weight_multiplicities_with_bound(
    rs: &RootSystem,
    lam: &Weight,
    bound: u128,
) -> Result<Arc<WeightMultiplicityTable>> {
    if !rs.is_dominant(lam) {
        return Err(Error::NonDominant(lam.coords2().to_vec()));
    }
    rs.check_in_lattice(lam)?;
    if let Some(hit) = rs.mult_cache.read().unwrap().get(lam) {
        return Ok(hit.clone());
    }
    let dim = weyl_dimension(rs, lam)?;
    if dim > bound {
        return Err(Error::DimensionBound { dim, bound });
    }

    let dominants = dominant_weights_below(rs, lam);
    let index: HashMap<Weight, usize> = dominants
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let lam_rho = lam.add(rs.rho());
    let norm_top = rs.invariant_form(&lam_rho, &lam_rho);

    let mut mult: Vec<u64> = vec![0; dominants.len()];
    mult[0] = 1;
    for i in 1..dominants.len() {
        let mu = &dominants[i];
        let mu_rho = mu.add(rs.rho());
        let denom = norm_top - rs.invariant_form(&mu_rho, &mu_rho);
        debug_assert!(denom > 0);
        let mut sum: i128 = 0;
        for alpha in rs.positive_roots() {
            let mut k = 1i64;
            loop {
                let shifted = mu.add(&alpha.scale(k));
                let dom = rs.dominantize(&shifted);
                let Some(&j) = index.get(&dom) else { break };
                sum += mult[j] as i128 * rs.invariant_form(&shifted, alpha);
                k += 1;
            }
        }
        let num = 2 * sum;
        debug_assert!(num % denom == 0, "Freudenthal division must be exact");
        mult[i] = (num / denom) as u64;
    }

    let mut entries = BTreeMap::new();
    let mut total: u128 = 0;
    for (mu, &m) in dominants.iter().zip(&mult) {
        debug_assert!(m > 0, "dominant weight below lambda with zero multiplicity");
        for nu in rs.weyl_orbit(mu)? {
            entries.insert(nu, m);
            total += m as u128;
        }
    }
    assert_eq!(total, dim, "multiplicity total disagrees with Weyl dimension");

    let table = Arc::new(WeightMultiplicityTable {
        highest: lam.clone(),
        entries,
        dimension: dim,
    });
    rs.mult_cache
        .write()
        .unwrap()
        .insert(lam.clone(), table.clone());
    Ok(table)
}

/// Finite real combination of irreducible characters, keyed by dominant
/// highest weights. Zero coefficients are pruned.
#[derive(Debug, Clone, PartialEq)]
pub struct CharExpansion<F: Real> {
    terms: BTreeMap<Weight, F>,
}

impl<F: Real> CharExpansion<F> {
    pub fn new(rs: &RootSystem, terms: impl IntoIterator<Item = (Weight, F)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (w, c) in terms {
            if !rs.is_dominant(&w) {
                return Err(Error::NonDominant(w.coords2().to_vec()));
            }
            if !c.is_finite() {
                return Err(Error::InvalidParameter(
                    "non-finite coefficient in character expansion".into(),
                ));
            }
            if c != F::zero() {
                *map.entry(w).or_insert_with(F::zero) += c;
            }
        }
        map.retain(|_, c| *c != F::zero());
        Ok(CharExpansion { terms: map })
    }

    pub fn empty() -> Self {
        CharExpansion {
            terms: BTreeMap::new(),
        }
    }

    /// Single character `χ_λ`.
    pub fn single(rs: &RootSystem, lam: Weight) -> Result<Self> {
        Self::new(rs, [(lam, F::one())])
    }

    pub fn terms(&self) -> &BTreeMap<Weight, F> {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Weight) -> F {
        self.terms.get(w).copied().unwrap_or_else(F::zero)
    }

    /// `Σ_λ c_λ χ_λ(t)`.
    pub fn evaluate(&self, rs: &RootSystem, t: &TorusPoint<F>) -> Result<Complex<F>> {
        let mut acc = Complex::<F>::zero();
        for (w, &c) in &self.terms {
            acc += char_value(rs, w, t)? * c;
        }
        Ok(acc)
    }

    /// Largest doubled coordinate over all `W(λ+ρ)` orbits — the bandwidth
    /// of the numerator form `χ·δ` of this expansion.
    pub fn bandwidth2(&self, rs: &RootSystem) -> i64 {
        self.terms
            .keys()
            .map(|w| rs.max_abs_coord2_in_orbit(&w.add(rs.rho())))
            .max()
            .unwrap_or(rs.max_abs_coord2_in_orbit(rs.rho()))
    }
}

impl CharExpansion<f64> {
    /// JSON form: list of `{weight: [doubled ints], coeff: float}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| {
                    serde_json::json!({ "weight": w.coords2().to_vec(), "coeff": c })
                })
                .collect(),
        )
    }

    pub fn from_json(rs: &RootSystem, v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::InvalidParameter("expected JSON array".into()))?;
        let mut terms = Vec::new();
        for item in arr {
            let coords: Vec<i64> = item["weight"]
                .as_array()
                .ok_or_else(|| Error::InvalidParameter("missing weight".into()))?
                .iter()
                .map(|x| x.as_i64().unwrap_or(0))
                .collect();
            let coeff = item["coeff"]
                .as_f64()
                .ok_or_else(|| Error::InvalidParameter("missing coeff".into()))?;
            terms.push((Weight::from_doubled(coords), coeff));
        }
        CharExpansion::new(rs, terms)
    }
}

/// Expansion of the monomial symmetric sum `m_λ = Σ_{ν∈W(λ)} e^ν` in the
/// character basis, via exact inversion of the unitriangular multiplicity
/// matrix over `{μ dominant, μ ⪯ λ}`.
pub fn monomial_in_char_basis<F: Real>(rs: &RootSystem, lam: &Weight) -> Result<CharExpansion<F>> {
    if !rs.is_dominant(lam) {
        return Err(Error::NonDominant(lam.coords2().to_vec()));
    }
    rs.check_in_lattice(lam)?;
    let dominants = dominant_weights_below(rs, lam);
    let index: HashMap<Weight, usize> = dominants
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let n = dominants.len();
    // K[j][v] = multiplicity of dominants[v] in the irreducible with highest
    // weight dominants[j]; lower-unitriangular in the height order.
    let mut k_rows: Vec<HashMap<usize, i128>> = Vec::with_capacity(n);
    for mu in &dominants {
        let table = weight_multiplicities(rs, mu)?;
        let mut row = HashMap::new();
        for (nu, &m) in table.entries() {
            if let Some(&v) = index.get(nu) {
                row.insert(v, m as i128);
            }
        }
        k_rows.push(row);
    }
    // Solve a·K = e_λ by forward substitution (e_λ is the unit vector at
    // index 0, the λ row of the inverse).
    let mut a = vec![0i128; n];
    for v in 0..n {
        let target: i128 = if v == 0 { 1 } else { 0 };
        let mut acc = target;
        for (j, aj) in a.iter().enumerate().take(v) {
            if *aj != 0 {
                if let Some(&kjv) = k_rows[j].get(&v) {
                    acc -= *aj * kjv;
                }
            }
        }
        a[v] = acc; // K[v][v] = 1
    }
    CharExpansion::new(
        rs,
        dominants
            .into_iter()
            .zip(a)
            .filter(|(_, c)| *c != 0)
            .map(|(w, c)| (w, cast::<F>(c as f64))),
    )
}

/// Replaces every `χ_λ` by its contragredient `χ_{λ̂}`, so that the new
/// expansion evaluates to the complex conjugate of the old one.
pub fn char_conjugate_expansion<F: Real>(
    rs: &RootSystem,
    e: &CharExpansion<F>,
) -> Result<CharExpansion<F>> {
    CharExpansion::new(
        rs,
        e.terms()
            .iter()
            .map(|(w, &c)| Ok((rs.dual_weight(w)?, c)))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// True iff every highest weight in the expansion is fixed by duality.
pub fn is_self_dual<F: Real>(rs: &RootSystem, e: &CharExpansion<F>) -> Result<bool> {
    for w in e.terms().keys() {
        if rs.dual_weight(w)? != *w {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::{build_root_system, GroupType};

    fn rs(s: &str) -> RootSystem {
        build_root_system(GroupType::parse(s).unwrap()).unwrap()
    }

    fn pt(thetas: &[f64]) -> TorusPoint<f64> {
        TorusPoint::new(thetas.to_vec())
    }

    #[test]
    fn a1_denominator_at_quarter_turn() {
        let a1 = rs("A1");
        // α = 2ε1 so ρ = ε1 and δ(θ) = e^{iθ} - e^{-iθ} = 2i·sinθ.
        let d = weyl_denominator(&a1, &pt(&[std::f64::consts::FRAC_PI_2]));
        assert!((d - Complex::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn denominator_vanishes_at_identity() {
        for name in ["A1", "C2", "G2"] {
            let r = rs(name);
            let d = weyl_denominator(&r, &pt(&vec![0.0; r.rank()]));
            assert!(d.norm() < 1e-12, "{name}");
        }
    }

    #[test]
    fn denominator_matches_product_form() {
        let c2 = rs("C2");
        let t = pt(&[0.7, 1.3]);
        let sum = weyl_denominator(&c2, &t);
        // Product form Π (e^{α/2} - e^{-α/2}).
        let mut prod = Complex::new(1.0, 0.0);
        for alpha in c2.positive_roots() {
            // e^{α/2}: halve the doubled coordinates (even for C2, so exact).
            let halfw = Weight::from_doubled(alpha.coords2().iter().map(|c| c / 2).collect());
            let e = t.exponential(&halfw);
            prod *= e - e.conj();
        }
        assert!((sum - prod).norm() < 1e-10 * (1.0 + prod.norm()));
    }

    #[test]
    fn c2_standard_character() {
        let c2 = rs("C2");
        let e1 = Weight::from_ints(&[1, 0]);
        for t in [pt(&[0.3, 1.1]), pt(&[2.0, 0.4])] {
            let v = char_value(&c2, &e1, &t).unwrap();
            let expect = 2.0 * t.thetas()[0].cos() + 2.0 * t.thetas()[1].cos();
            assert!((v - Complex::new(expect, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn c2_sym_square_character() {
        let c2 = rs("C2");
        let lam = Weight::from_ints(&[2, 0]);
        let t = pt(&[0.9, 0.25]);
        let x = 2.0 * t.thetas()[0].cos();
        let y = 2.0 * t.thetas()[1].cos();
        let expect = x * x + y * y - 2.0 + x * y;
        let v = char_value(&c2, &lam, &t).unwrap();
        assert!((v - Complex::new(expect, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn g2_degree_seven_character() {
        let g2 = rs("G2");
        let lam = Weight::from_ints(&[1, 0]);
        let t = pt(&[0.8, 1.9]);
        let (t1, t2) = (t.thetas()[0], t.thetas()[1]);
        let expect = 1.0 + 2.0 * t1.cos() + 2.0 * t2.cos() + 2.0 * (t1 - t2).cos();
        let v = char_value(&g2, &lam, &t).unwrap();
        assert!((v - Complex::new(expect, 0.0)).norm() < 1e-9);
        assert_eq!(weyl_dimension(&g2, &lam).unwrap(), 7);
    }

    #[test]
    fn bn_standard_character() {
        let b3 = rs("B3");
        let e1 = Weight::from_ints(&[1, 0, 0]);
        let t = pt(&[0.4, 1.0, 2.2]);
        let expect: f64 = 1.0 + t.thetas().iter().map(|th| 2.0 * th.cos()).sum::<f64>();
        let v = char_value(&b3, &e1, &t).unwrap();
        assert!((v - Complex::new(expect, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn char_at_identity_is_dimension() {
        let c2 = rs("C2");
        let lam = Weight::from_ints(&[2, 0]);
        let v = char_value(&c2, &lam, &pt(&[0.0, 0.0])).unwrap();
        assert!((v.re - 10.0).abs() < 1e-9 && v.im.abs() < 1e-12);
    }

    #[test]
    fn branch_agreement_near_threshold() {
        let c2 = rs("C2");
        let lam = Weight::from_ints(&[2, 0]);
        let table = weight_multiplicities(&c2, &lam).unwrap();
        // Points close to (but above) the singular threshold.
        for eps in [1e-3, 1e-2, 0.05] {
            let t = pt(&[eps, 2.0 * eps]);
            let quotient = char_value(&c2, &lam, &t).unwrap();
            let fallback = table.evaluate(&t);
            assert!((quotient - fallback).norm() < 1e-8, "eps={eps}");
        }
    }

    #[test]
    fn c2_sym_square_multiplicities() {
        let c2 = rs("C2");
        let lam = Weight::from_ints(&[2, 0]);
        let table = weight_multiplicities(&c2, &lam).unwrap();
        assert_eq!(table.dimension(), 10);
        assert_eq!(table.multiplicity(&Weight::zero(2)), 2);
        for w in [
            Weight::from_ints(&[2, 0]),
            Weight::from_ints(&[-2, 0]),
            Weight::from_ints(&[0, 2]),
            Weight::from_ints(&[1, 1]),
            Weight::from_ints(&[1, -1]),
            Weight::from_ints(&[-1, 1]),
        ] {
            assert_eq!(table.multiplicity(&w), 1, "{w}");
        }
    }

    #[test]
    fn trivial_and_a1_multiplicities() {
        let c2 = rs("C2");
        let triv = weight_multiplicities(&c2, &Weight::zero(2)).unwrap();
        assert_eq!(triv.dimension(), 1);
        assert_eq!(triv.multiplicity(&Weight::zero(2)), 1);

        let a1 = rs("A1");
        for u in [1i64, 4, 9] {
            let lam = Weight::from_ints(&[u]);
            let t = weight_multiplicities(&a1, &lam).unwrap();
            assert_eq!(t.dimension() as i64, u + 1);
            assert!(t.entries().values().all(|&m| m == 1));
        }
    }

    #[test]
    fn multiplicity_table_is_weyl_invariant() {
        let g2 = rs("G2");
        let lam = Weight::from_ints(&[1, 1]); // adjoint, dim 14
        let table = weight_multiplicities(&g2, &lam).unwrap();
        assert_eq!(table.dimension(), 14);
        for w in g2.weyl_elements() {
            for (mu, &m) in table.entries() {
                assert_eq!(table.multiplicity(&w.apply(mu)), m);
            }
        }
        assert_eq!(table.multiplicity(&Weight::zero(2)), 2);
    }

    #[test]
    fn generating_function_check() {
        // Multiplicity sum equals the character at random regular points.
        let c2 = rs("C2");
        let lam = Weight::from_ints(&[2, 1]);
        let table = weight_multiplicities(&c2, &lam).unwrap();
        let mut seed = 0.123f64;
        for _ in 0..20 {
            seed = (seed * 997.0).fract();
            let t = pt(&[1.0 + seed, 2.0 + seed * seed]);
            let a = char_value(&c2, &lam, &t).unwrap();
            let b = table.evaluate(&t);
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn monomial_expansion_c2() {
        let c2 = rs("C2");
        let lam = Weight::from_ints(&[2, 0]);
        let e: CharExpansion<f64> = monomial_in_char_basis(&c2, &lam).unwrap();
        assert_eq!(e.coefficient(&Weight::from_ints(&[2, 0])), 1.0);
        assert_eq!(e.coefficient(&Weight::from_ints(&[1, 1])), -1.0);
        assert_eq!(e.coefficient(&Weight::zero(2)), -1.0);
        assert_eq!(e.terms().len(), 3);

        let single: CharExpansion<f64> =
            monomial_in_char_basis(&c2, &Weight::from_ints(&[1, 0])).unwrap();
        assert_eq!(single.terms().len(), 1);
        assert_eq!(single.coefficient(&Weight::from_ints(&[1, 0])), 1.0);

        let triv: CharExpansion<f64> = monomial_in_char_basis(&c2, &Weight::zero(2)).unwrap();
        assert_eq!(triv.coefficient(&Weight::zero(2)), 1.0);
    }

    #[test]
    fn monomial_expansion_reconstructs_orbit_sum() {
        let c2 = rs("C2");
        let lam = Weight::from_ints(&[2, 1]);
        let e: CharExpansion<f64> = monomial_in_char_basis(&c2, &lam).unwrap();
        let orbit = c2.weyl_orbit(&lam).unwrap();
        for k in 0..10 {
            let t = pt(&[0.31 * (k as f64 + 1.0), 0.17 * (k as f64 + 2.0)]);
            let lhs = e.evaluate(&c2, &t).unwrap();
            let rhs: Complex<f64> = orbit.iter().map(|nu| t.exponential(nu)).sum();
            assert!((lhs - rhs).norm() < 1e-8);
        }
    }

    #[test]
    fn conjugate_expansion_and_self_duality() {
        let a2 = rs("A2");
        let w = a2.fundamental_weights().to_vec();
        let e = CharExpansion::<f64>::single(&a2, w[0].clone()).unwrap();
        let conj = char_conjugate_expansion(&a2, &e).unwrap();
        assert_eq!(conj.coefficient(&w[1]), 1.0);
        assert!(!is_self_dual(&a2, &e).unwrap());
        // Pointwise: conj(χ_{ω1}(t)) = χ_{ω2}(t).
        let t = pt(&[0.6, 1.8]);
        let lhs = e.evaluate(&a2, &t).unwrap().conj();
        let rhs = conj.evaluate(&a2, &t).unwrap();
        assert!((lhs - rhs).norm() < 1e-10);

        let c2 = rs("C2");
        let ec = CharExpansion::<f64>::single(&c2, Weight::from_ints(&[1, 0])).unwrap();
        assert_eq!(char_conjugate_expansion(&c2, &ec).unwrap(), ec);
        assert!(is_self_dual(&c2, &ec).unwrap());
        assert!(is_self_dual(&c2, &CharExpansion::<f64>::empty()).unwrap());
    }

    #[test]
    fn w_invariance_of_char_value() {
        let g2 = rs("G2");
        let lam = Weight::from_ints(&[1, 0]);
        let t = pt(&[0.77, 1.21]);
        let base = char_value(&g2, &lam, &t).unwrap();
        for w in g2.weyl_elements() {
            let moved = weyl_transport_angles(w, &t);
            let v = char_value(&g2, &lam, &moved).unwrap();
            assert!((v - base).norm() < 1e-9);
        }
    }

    #[test]
    fn reality_of_self_dual_characters() {
        let c2 = rs("C2");
        for lam in [Weight::from_ints(&[1, 0]), Weight::from_ints(&[2, 1])] {
            let t = pt(&[1.3, 0.8]);
            let v = char_value(&c2, &lam, &t).unwrap();
            assert!(v.im.abs() < 1e-9);
        }
    }

    #[test]
    fn char_expansion_json_round_trip() {
        let c2 = rs("C2");
        let e = CharExpansion::<f64>::new(
            &c2,
            [
                (Weight::from_ints(&[1, 0]), 0.6),
                (Weight::from_ints(&[1, 1]), -0.8),
            ],
        )
        .unwrap();
        let v = e.to_json();
        let back = CharExpansion::from_json(&c2, &v).unwrap();
        assert_eq!(e, back);
    }

    #[test]
    fn non_dominant_rejected() {
        let c2 = rs("C2");
        let bad = Weight::from_ints(&[0, 1]);
        assert!(char_value(&c2, &bad, &pt(&[0.1, 0.2])).is_err());
        assert!(weight_multiplicities(&c2, &bad).is_err());
        assert!(monomial_in_char_basis::<f64>(&c2, &bad).is_err());
    }

    #[test]
    fn dimension_bound_enforced() {
        let c2 = rs("C2");
        let lam = Weight::from_ints(&[2, 0]);
        assert!(matches!(
            weight_multiplicities_with_bound(&c2, &lam, 5),
            Err(Error::DimensionBound { dim: 10, bound: 5 })
        ));
    }
}
