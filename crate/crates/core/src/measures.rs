//! Sato-Tate and Plancherel densities, exact-bandwidth torus quadrature,
//! inner products and rejection sampling.
//!
//! Every integral runs over the full torus against `|δ|²/|W|` times
//! normalized Haar, exploiting W-invariance of the integrands instead of a
//! fundamental domain. The uniform grid is spectrally exact: a trigonometric
//! monomial below the Nyquist band integrates to machine precision, so Gram
//! matrices of characters come out exact up to rounding.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;

use crate::characters::{char_conjugate_expansion, char_numerator, CharExpansion, TorusPoint};
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::root_systems::{RootSystem, Weight};
use crate::scalar::{cast, Real};

/// Compensated (Kahan) accumulator; reduction order is always the node
/// order, so sums are independent of the worker count.
#[derive(Clone, Copy)]
pub(crate) struct Kahan<F: Real> {
    pub(crate) sum: F,
    c: F,
}

impl<F: Real> Kahan<F> {
    pub(crate) fn new() -> Self {
        Kahan {
            sum: F::zero(),
            c: F::zero(),
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, x: F) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Uniform product grid on the torus with `M` nodes per dimension, `M` odd.
///
/// Nodes live on the double cover (angle step `4π/M`), so exponentials of
/// half-integral weights are handled exactly as well: any doubled frequency
/// `c2` with `0 < |c2| < M` averages to exactly zero over the grid.
#[derive(Debug, Clone)]
pub struct TorusQuadrature<F: Real> {
    rank: usize,
    nodes_per_dim: usize,
    _marker: std::marker::PhantomData<F>,
}

impl<F: Real> TorusQuadrature<F> {
    pub fn new(rank: usize, nodes_per_dim: usize) -> Result<Self> {
        if rank == 0 || nodes_per_dim < 3 || nodes_per_dim % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "quadrature needs rank >= 1 and odd nodes_per_dim >= 3, got rank {rank}, M {nodes_per_dim}"
            )));
        }
        let count = (nodes_per_dim as u128).pow(rank as u32);
        if count > 200_000_000 {
            return Err(Error::InvalidParameter(format!(
                "quadrature grid too large: {count} nodes"
            )));
        }
        let q = TorusQuadrature {
            rank,
            nodes_per_dim,
            _marker: std::marker::PhantomData,
        };
        q.check_monomial_exactness();
        Ok(q)
    }

    /// Smallest grid exact for doubled frequencies up to `band2` per
    /// coordinate (plus slack).
    pub fn for_band2(rank: usize, band2: i64) -> Result<Self> {
        let mut m = band2.max(0) as usize + 3;
        if m % 2 == 0 {
            m += 1;
        }
        Self::new(rank, m)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nodes_per_dim(&self) -> usize {
        self.nodes_per_dim
    }

    /// Largest doubled frequency integrated exactly.
    pub fn capacity2(&self) -> i64 {
        self.nodes_per_dim as i64 - 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes_per_dim.pow(self.rank as u32)
    }

    fn node_angle(&self, k: usize) -> F {
        let four_pi = cast::<F>(4.0) * F::PI();
        four_pi * cast::<F>(k as f64) / cast::<F>(self.nodes_per_dim as f64)
    }

    fn node(&self, mut flat: usize) -> TorusPoint<F> {
        let m = self.nodes_per_dim;
        let mut thetas = vec![F::zero(); self.rank];
        for j in (0..self.rank).rev() {
            thetas[j] = self.node_angle(flat % m);
            flat /= m;
        }
        TorusPoint::from_raw(thetas)
    }

    /// All grid nodes in flat row-major order.
    pub fn nodes(&self) -> impl Iterator<Item = TorusPoint<F>> + '_ {
        (0..self.node_count()).map(|i| self.node(i))
    }

    fn check_monomial_exactness(&self) {
        let m = self.nodes_per_dim;
        for c2 in [1i64, 2, m as i64 - 1, m as i64] {
            let mut re = Kahan::new();
            let mut im = Kahan::new();
            for k in 0..m {
                let phase = self.node_angle(k) * cast::<F>(c2 as f64) * cast::<F>(0.5);
                re.add(phase.cos());
                im.add(phase.sin());
            }
            let avg = Complex::new(re.sum, im.sum) / cast::<F>(m as f64);
            let expect = if c2 == m as i64 {
                Complex::new(F::one(), F::zero())
            } else {
                Complex::zero()
            };
            assert!(
                (avg - expect).norm().to_f64() < 1e-11 * m as f64,
                "grid lost monomial exactness at frequency {c2}"
            );
        }
    }

    /// Average of `f` over the grid (= normalized-Haar integral for
    /// integrands within the bandwidth). Parallel over the first coordinate
    /// slab; the reduction is compensated and in fixed order.
    pub fn integrate<G>(&self, f: G) -> Complex<F>
    where
        G: Fn(&TorusPoint<F>) -> Complex<F> + Sync,
    {
        let m = self.nodes_per_dim;
        let per_slab = m.pow(self.rank as u32 - 1);
        let slabs: Vec<Complex<F>> = (0..m)
            .into_par_iter()
            .map(|k0| {
                let mut re = Kahan::new();
                let mut im = Kahan::new();
                for i in 0..per_slab {
                    let v = f(&self.node(k0 * per_slab + i));
                    re.add(v.re);
                    im.add(v.im);
                }
                Complex::new(re.sum, im.sum)
            })
            .collect();
        let mut re = Kahan::new();
        let mut im = Kahan::new();
        for s in slabs {
            re.add(s.re);
            im.add(s.im);
        }
        Complex::new(re.sum, im.sum) / cast::<F>(self.node_count() as f64)
    }
}

/// Unnormalized Sato-Tate density `Π_{α∈R}(1 − e^{i⟨α,θ⟩})`, computed as
/// `Π_{α>0}|1 − e^{i⟨α,θ⟩}|²`; equals `|δ(t)|²`.
pub fn st_density<F: Real>(rs: &RootSystem, t: &TorusPoint<F>) -> F {
    let mut prod = F::one();
    for alpha in rs.positive_roots() {
        let e = t.exponential(alpha);
        let one_minus = Complex::new(F::one() - e.re, -e.im);
        prod *= one_minus.norm_sqr();
    }
    prod
}

/// Unnormalized Plancherel density
/// `Π_{α∈R}(1 − e^{i⟨α,θ⟩})/(1 − p⁻¹e^{i⟨α,θ⟩})`; real and nonnegative
/// since the factors pair off by `α ↔ −α` conjugation.
pub fn plancherel_density<F: Real>(rs: &RootSystem, p: u64, t: &TorusPoint<F>) -> Result<F> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!(
            "Plancherel density needs p >= 2, got {p}"
        )));
    }
    let inv_p = F::one() / cast::<F>(p as f64);
    let mut prod = F::one();
    for alpha in rs.positive_roots() {
        let e = t.exponential(alpha);
        let num = Complex::new(F::one() - e.re, -e.im).norm_sqr();
        let den = Complex::new(F::one() - inv_p * e.re, -inv_p * e.im).norm_sqr();
        prod *= num / den;
    }
    Ok(prod)
}

/// Doubled per-coordinate bandwidth of `|δ|²` (frequencies are differences
/// of two points of the `W(ρ)` orbit).
pub fn st_band2(rs: &RootSystem) -> i64 {
    2 * rs.max_abs_coord2_in_orbit(rs.rho())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    SatoTate,
    Plancherel { p: u64 },
}

impl std::fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeasureKind::SatoTate => write!(f, "sato-tate"),
            MeasureKind::Plancherel { p } => write!(f, "plancherel(p={p})"),
        }
    }
}

/// A normalized probability density on the torus (w.r.t. normalized Haar).
#[derive(Debug, Clone)]
pub struct MeasureDensity<F: Real> {
    kind: MeasureKind,
    rank: usize,
    normalization: F,
}

impl<F: Real> MeasureDensity<F> {
    /// Sato-Tate measure; the density is a trigonometric polynomial so the
    /// normalization quadrature is exact. The constant always comes out as
    /// `1/|W|`.
    pub fn sato_tate(rs: &RootSystem) -> Result<Self> {
        let q = TorusQuadrature::<F>::for_band2(rs.rank(), st_band2(rs))?;
        Self::normalize(MeasureKind::SatoTate, rs, &q)
    }

    /// Plancherel measure at `p`; the density is rational-trigonometric, so
    /// the grid is doubled until successive mass estimates agree to `1e-7`.
    pub fn plancherel(rs: &RootSystem, p: u64) -> Result<Self> {
        let q = TorusQuadrature::<F>::for_band2(rs.rank(), st_band2(rs))?;
        Self::normalize(MeasureKind::Plancherel { p }, rs, &q)
    }

    /// Computes the normalization constant against the given base grid.
    pub fn normalize(kind: MeasureKind, rs: &RootSystem, q: &TorusQuadrature<F>) -> Result<Self> {
        let mass = match kind {
            MeasureKind::SatoTate => {
                if q.capacity2() < st_band2(rs) {
                    return Err(Error::Bandwidth {
                        needed: st_band2(rs) as usize + 1,
                        have: q.nodes_per_dim(),
                    });
                }
                q.integrate(|t| Complex::new(st_density(rs, t), F::zero())).re
            }
            MeasureKind::Plancherel { p } => {
                if p < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "Plancherel density needs p >= 2, got {p}"
                    )));
                }
                let mut m = q.nodes_per_dim();
                let mut prev = TorusQuadrature::<F>::new(q.rank(), m)?
                    .integrate(|t| Complex::new(plancherel_density(rs, p, t).unwrap(), F::zero()))
                    .re;
                let tol = cast::<F>(1e-7);
                let mut accepted = None;
                for _ in 0..8 {
                    m = 2 * m + 1;
                    let next = TorusQuadrature::<F>::new(q.rank(), m)?
                        .integrate(|t| {
                            Complex::new(plancherel_density(rs, p, t).unwrap(), F::zero())
                        })
                        .re;
                    if (next - prev).abs() <= tol * next.abs() {
                        accepted = Some(next);
                        break;
                    }
                    prev = next;
                }
                accepted.ok_or(Error::Bandwidth {
                    needed: 2 * m,
                    have: m,
                })?
            }
        };
        if !(mass.to_f64() > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "density mass not positive: {}",
                mass.to_f64()
            )));
        }
        Ok(MeasureDensity {
            kind,
            rank: rs.rank(),
            normalization: F::one() / mass,
        })
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Multiplier applied to the raw density (for Sato-Tate this is
    /// `1/|W|`).
    pub fn normalization(&self) -> F {
        self.normalization
    }

    pub fn unnormalized(&self, rs: &RootSystem, t: &TorusPoint<F>) -> F {
        match self.kind {
            MeasureKind::SatoTate => st_density(rs, t),
            MeasureKind::Plancherel { p } => plancherel_density(rs, p, t).unwrap(),
        }
    }

    /// Normalized probability density w.r.t. normalized Haar.
    pub fn density(&self, rs: &RootSystem, t: &TorusPoint<F>) -> F {
        self.unnormalized(rs, t) * self.normalization
    }
}

/// `⟨f, g⟩ = ∫ f·conj(g) dμ^ST` for character expansions, computed through
/// the numerator forms `f·δ`, `g·δ` so the integrand is a trigonometric
/// polynomial with no singular points.
pub fn inner_product<F: Real>(
    rs: &RootSystem,
    q: &TorusQuadrature<F>,
    f: &CharExpansion<F>,
    g: &CharExpansion<F>,
) -> Result<Complex<F>> {
    let needed = f.bandwidth2(rs) + g.bandwidth2(rs);
    if q.capacity2() < needed {
        return Err(Error::Bandwidth {
            needed: needed as usize + 1,
            have: q.nodes_per_dim(),
        });
    }
    let inv_w = F::one() / cast::<F>(rs.weyl_order() as f64);
    let numerator = |e: &CharExpansion<F>, t: &TorusPoint<F>| -> Complex<F> {
        let mut acc = Complex::<F>::zero();
        for (lam, &c) in e.terms() {
            acc += char_numerator(rs, lam, t) * c;
        }
        acc
    };
    Ok(q.integrate(|t| numerator(f, t) * numerator(g, t).conj() * inv_w))
}

/// Gram matrix `[⟨χ_λ, χ_μ⟩]` over a list of dominant weights, with a grid
/// sized from the weights themselves.
pub fn gram_matrix<F: Real>(rs: &RootSystem, lams: &[Weight]) -> Result<Vec<Vec<Complex<F>>>> {
    let exps: Vec<CharExpansion<F>> = lams
        .iter()
        .map(|w| CharExpansion::single(rs, w.clone()))
        .collect::<Result<_>>()?;
    let band = exps
        .iter()
        .map(|e| e.bandwidth2(rs))
        .max()
        .unwrap_or(st_band2(rs));
    let q = TorusQuadrature::for_band2(rs.rank(), 2 * band)?;
    let mut out = Vec::with_capacity(exps.len());
    for f in &exps {
        let mut row = Vec::with_capacity(exps.len());
        for g in &exps {
            row.push(inner_product(rs, &q, f, g)?);
        }
        out.push(row);
    }
    Ok(out)
}

/// Moments of a character combination against the normalized Sato-Tate
/// measure.
#[derive(Debug, Clone, Copy)]
pub struct CharacterMoments<F: Real> {
    /// `∫ h`
    pub first: Complex<F>,
    /// `∫ |h|²`
    pub second: F,
    /// `∫ (Re h)²`
    pub re_sq: F,
    /// `∫ (Im h)²`
    pub im_sq: F,
    /// `∫ h²` (no conjugation)
    pub square_no_conj: Complex<F>,
}

pub fn character_moments<F: Real>(
    rs: &RootSystem,
    e: &CharExpansion<F>,
) -> Result<CharacterMoments<F>> {
    if e.is_empty() {
        return Err(Error::InvalidParameter(
            "character_moments needs a nonempty expansion".into(),
        ));
    }
    let conj = char_conjugate_expansion(rs, e)?;
    let trivial = CharExpansion::single(rs, Weight::zero(rs.rank()))?;
    let band = e.bandwidth2(rs).max(conj.bandwidth2(rs));
    let q = TorusQuadrature::for_band2(rs.rank(), 2 * band)?;
    let first = inner_product(rs, &q, e, &trivial)?;
    let second = inner_product(rs, &q, e, e)?.re;
    // ∫h² = ⟨h, h̄⟩; the real-part/imag-part second moments follow from
    // Re h = (h + h̄)/2.
    let square_no_conj = inner_product(rs, &q, e, &conj)?;
    let re_sq = (second + square_no_conj.re) * cast::<F>(0.5);
    let im_sq = (second - square_no_conj.re) * cast::<F>(0.5);
    Ok(CharacterMoments {
        first,
        second,
        re_sq,
        im_sq,
        square_no_conj,
    })
}

const SAMPLE_BLOCK: usize = 4096;

/// Grid-estimated supremum of the normalized density, inflated by the 5%
/// rejection-envelope margin.
pub(crate) fn envelope<F: Real>(rs: &RootSystem, d: &MeasureDensity<F>) -> Result<F> {
    let m = (st_band2(rs) as usize + 3).max(65) | 1;
    let q = TorusQuadrature::<F>::new(rs.rank(), m)?;
    let mut sup = F::zero();
    for t in q.nodes() {
        let v = d.density(rs, &t);
        if v > sup {
            sup = v;
        }
    }
    Ok(sup * cast::<F>(1.05))
}

/// `n` i.i.d. draws from the density by rejection against uniform torus
/// proposals. Draw `i` lives in block `i / 4096`; each block owns RNG
/// substream `(seed, block)`, so output is byte-identical for any worker
/// count. Angles are drawn on the double cover `[0, 4π)` so that
/// half-integral weights evaluate consistently downstream.
pub fn sample<F: Real>(
    rs: &RootSystem,
    d: &MeasureDensity<F>,
    seed: u64,
    n: usize,
) -> Result<Vec<TorusPoint<F>>> {
    let env = envelope(rs, d)?;
    let env64 = env.to_f64();
    let blocks = n.div_ceil(SAMPLE_BLOCK);
    let results: Vec<Result<Vec<TorusPoint<F>>>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = substream(seed, b as u64);
            let count = SAMPLE_BLOCK.min(n - b * SAMPLE_BLOCK);
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                loop {
                    let thetas: Vec<F> = (0..rs.rank())
                        .map(|_| cast::<F>(rng.gen::<f64>() * 4.0 * std::f64::consts::PI))
                        .collect();
                    let t = TorusPoint::from_raw(thetas);
                    let dens = d.density(rs, &t).to_f64();
                    if dens > env64 {
                        return Err(Error::EnvelopeViolation {
                            density: dens,
                            envelope: env64,
                        });
                    }
                    if rng.gen::<f64>() * env64 <= dens {
                        out.push(t);
                        break;
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::with_capacity(n);
    for r in results {
        all.extend(r?);
    }
    Ok(all)
}
