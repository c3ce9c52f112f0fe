//! Monte Carlo pseudo-family simulator for normalized Hecke-eigenvalue
//! sums.
//!
//! Actual automorphic families are replaced by i.i.d. Satake-parameter
//! draws from the per-prime Plancherel (or limiting Sato-Tate) measures —
//! the distributional content the limit theorems reduce to. Each pseudo-form
//! contributes `S = Σ_{p≤x} ĥ(t_p)/√π(x)` with `ĥ = Σ c_λ χ_λ`; reports are
//! byte-identical for a fixed seed regardless of worker count.
//!
//! Statistics here are pinned to `f64`.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::{is_self_dual, weight_multiplicities, CharExpansion, TorusPoint};
use crate::error::{Error, Result};
use crate::measures::{envelope, Kahan, MeasureDensity};
use crate::rng::substream;
use crate::root_systems::{GroupType, RootSystem, Weight};

/// Primes above this are sampled from Sato-Tate even in per-prime
/// Plancherel mode; the density difference is `O(1/p) < 0.2%`, far below
/// every tolerance in use.
pub const PLANCHEREL_CUTOFF: u64 = 500;

/// Test function `ĥ = Σ c_λ χ_λ` with the family-sum constraints:
/// no constant term and `Σ c_λ² = 1`.
#[derive(Debug, Clone)]
pub struct TestFunction {
    expansion: CharExpansion<f64>,
    self_dual: bool,
}

impl TestFunction {
    /// Validates the constraints and requires every constituent to be
    /// self-dual (real-valued sums).
    pub fn self_dual(rs: &RootSystem, expansion: CharExpansion<f64>) -> Result<Self> {
        let t = Self::checked(rs, expansion)?;
        if !t.self_dual {
            return Err(Error::InvalidParameter(
                "test function contains a non-self-dual character; use complex mode".into(),
            ));
        }
        Ok(t)
    }

    /// Complex mode: the self-duality requirement is lifted, for the
    /// complex-moment experiments.
    pub fn complex(rs: &RootSystem, expansion: CharExpansion<f64>) -> Result<Self> {
        Self::checked(rs, expansion)
    }

    fn checked(rs: &RootSystem, expansion: CharExpansion<f64>) -> Result<Self> {
        if expansion.is_empty() {
            return Err(Error::InvalidParameter("empty test function".into()));
        }
        if expansion.coefficient(&Weight::zero(rs.rank())) != 0.0 {
            return Err(Error::InvalidParameter(
                "test function must have no constant term".into(),
            ));
        }
        let var: f64 = expansion.terms().values().map(|c| c * c).sum();
        if (var - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "test function needs unit variance, got sum of squares {var}"
            )));
        }
        let self_dual = is_self_dual(rs, &expansion)?;
        Ok(TestFunction {
            expansion,
            self_dual,
        })
    }

    pub fn expansion(&self) -> &CharExpansion<f64> {
        &self.expansion
    }

    pub fn is_self_dual(&self) -> bool {
        self.self_dual
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    SatoTateOnly,
    PlancherelPerPrime,
}

#[derive(Debug, Clone)]
pub struct FamilyConfig {
    pub group: GroupType,
    pub test_fn: TestFunction,
    /// Prime cutoff `x`.
    pub x: u64,
    /// Number of pseudo-forms `N`.
    pub family_size: usize,
    pub sampling: SamplingMode,
    pub seed: u64,
}

impl FamilyConfig {
    fn validate(&self) -> Result<()> {
        if self.x < 3 {
            return Err(Error::InvalidParameter(format!(
                "prime cutoff x must be >= 3, got {}",
                self.x
            )));
        }
        if self.family_size < 100 {
            return Err(Error::InvalidParameter(format!(
                "family size must be >= 100, got {}",
                self.family_size
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// 62 edges of the 61 equal bins on `[-4, 4]`.
    pub edges: Vec<f64>,
    /// 63 counts: underflow, the 61 bins, overflow.
    pub counts: Vec<u64>,
}

impl Histogram {
    pub const BINS: usize = 61;

    fn build(samples: &[f64]) -> Self {
        let (lo, hi) = (-4.0f64, 4.0f64);
        let edges: Vec<f64> = (0..=Self::BINS)
            .map(|i| lo + (hi - lo) * i as f64 / Self::BINS as f64)
            .collect();
        let mut counts = vec![0u64; Self::BINS + 2];
        let width = (hi - lo) / Self::BINS as f64;
        for &s in samples {
            let slot = if s < lo {
                0
            } else if s >= hi {
                Self::BINS + 1
            } else {
                1 + (((s - lo) / width) as usize).min(Self::BINS - 1)
            };
            counts[slot] += 1;
        }
        Histogram { edges, counts }
    }
}

/// Aggregate statistics of the normalized sums of one pseudo-family.
///
/// Wall-clock runtime is kept out of the serialized form so that reports
/// are byte-reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CLTReport {
    pub mean: f64,
    pub variance: f64,
    /// Standardized central third moment.
    pub skewness: f64,
    /// Standardized central fourth moment minus 3.
    pub excess_kurtosis: f64,
    /// Standardized central moments of orders 1..=8.
    pub standardized_moments: Vec<f64>,
    /// Raw (uncentered) moments of orders 1..=8.
    pub raw_moments: Vec<f64>,
    /// Kolmogorov-Smirnov distance to the standard normal.
    pub ks: f64,
    pub histogram: Histogram,
    pub prime_count: usize,
    pub family_size: usize,
    pub seed: u64,
    #[serde(skip)]
    pub runtime_secs: f64,
}

/// Eratosthenes sieve; returns all primes `<= x`.
pub fn sieve_primes(x: u64) -> Result<Vec<u64>> {
    if x < 2 {
        return Err(Error::InvalidParameter(format!(
            "prime sieve needs x >= 2, got {x}"
        )));
    }
    let n = x as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    Ok(primes)
}

/// Standard normal CDF via `erf`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + libm::erf(x / std::f64::consts::SQRT_2))
}

/// `sup_x |F_n(x) − Φ(x)|` against the standard normal.
pub fn ks_distance(samples: &[f64]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InvalidParameter(
            "ks_distance needs at least 2 samples".into(),
        ));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let phi = normal_cdf(x);
        sup = sup
            .max((phi - i as f64 / n).abs())
            .max(((i + 1) as f64 / n - phi).abs());
    }
    Ok(sup)
}

/// One per-prime sampling distribution with its rejection envelope.
struct Prepared {
    density: MeasureDensity<f64>,
    envelope: f64,
}

impl Prepared {
    fn new(rs: &RootSystem, density: MeasureDensity<f64>) -> Result<Self> {
        let env = envelope(rs, &density)?;
        Ok(Prepared {
            density,
            envelope: env,
        })
    }

    /// One rejection draw; proposals are uniform on the double cover
    /// `[0, 4π)^r` so half-integral weights evaluate consistently.
    fn draw(&self, rs: &RootSystem, rng: &mut impl Rng) -> Result<TorusPoint<f64>> {
        loop {
            let thetas: Vec<f64> = (0..rs.rank())
                .map(|_| rng.gen::<f64>() * 4.0 * std::f64::consts::PI)
                .collect();
            let t = TorusPoint::from_raw(thetas);
            let dens = self.density.density(rs, &t);
            if dens > self.envelope {
                return Err(Error::EnvelopeViolation {
                    density: dens,
                    envelope: self.envelope,
                });
            }
            if rng.gen::<f64>() * self.envelope <= dens {
                return Ok(t);
            }
        }
    }
}

/// The normalized complex sums `S_i`, one per pseudo-form, plus `π(x)`.
pub struct FamilySums {
    pub sums: Vec<Complex<f64>>,
    pub prime_count: usize,
}

/// Draws every pseudo-form of the family. Member `i` owns RNG substream
/// `(seed, i)` and iterates primes in order, so the output is independent
/// of the parallel schedule.
pub fn member_sums(rs: &RootSystem, cfg: &FamilyConfig) -> Result<FamilySums> {
    cfg.validate()?;
    let primes = sieve_primes(cfg.x)?;
    let st = Arc::new(Prepared::new(rs, MeasureDensity::sato_tate(rs)?)?);
    let prepared: Vec<Arc<Prepared>> = match cfg.sampling {
        SamplingMode::SatoTateOnly => vec![st; primes.len()],
        SamplingMode::PlancherelPerPrime => primes
            .iter()
            .map(|&p| {
                if p > PLANCHEREL_CUTOFF {
                    Ok(st.clone())
                } else {
                    Ok(Arc::new(Prepared::new(
                        rs,
                        MeasureDensity::plancherel(rs, p)?,
                    )?))
                }
            })
            .collect::<Result<_>>()?,
    };
    // Warm the multiplicity memo so the singular-point fallback never
    // contends on the write lock inside the parallel loop.
    for lam in cfg.test_fn.expansion().terms().keys() {
        let _ = weight_multiplicities(rs, lam);
    }
    let norm = 1.0 / (primes.len() as f64).sqrt();
    let sums: Vec<Complex<f64>> = (0..cfg.family_size)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(cfg.seed, i as u64);
            let mut re = Kahan::new();
            let mut im = Kahan::new();
            for d in &prepared {
                let t = d.draw(rs, &mut rng)?;
                let v = cfg.test_fn.expansion().evaluate(rs, &t)?;
                re.add(v.re);
                im.add(v.im);
            }
            Ok(Complex::new(re.sum * norm, im.sum * norm))
        })
        .collect::<Result<_>>()?;
    Ok(FamilySums {
        sums,
        prime_count: primes.len(),
    })
}

/// Runs the family experiment and aggregates the report (statistics of the
/// real parts; in self-dual mode the imaginary parts vanish identically up
/// to rounding).
pub fn simulate_family(rs: &RootSystem, cfg: &FamilyConfig) -> Result<CLTReport> {
    let t0 = Instant::now();
    let fam = member_sums(rs, cfg)?;
    let samples: Vec<f64> = fam.sums.iter().map(|z| z.re).collect();
    let mut report = report_from_samples(&samples, fam.prime_count, cfg.seed)?;
    report.runtime_secs = t0.elapsed().as_secs_f64();
    Ok(report)
}

/// Statistics for a vector of real sums; reduction is compensated and in
/// index order.
pub fn report_from_samples(samples: &[f64], prime_count: usize, seed: u64) -> Result<CLTReport> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "need at least 2 family members".into(),
        ));
    }
    let mut mean_acc = Kahan::new();
    for &s in samples {
        mean_acc.add(s);
    }
    let mean = mean_acc.sum / n as f64;

    let mut central = [Kahan::new(); 8];
    let mut raw = [Kahan::new(); 8];
    for &s in samples {
        let d = s - mean;
        let mut dp = 1.0;
        let mut sp = 1.0;
        for k in 0..8 {
            dp *= d;
            sp *= s;
            central[k].add(dp);
            raw[k].add(sp);
        }
    }
    let central: Vec<f64> = central.iter().map(|k| k.sum / n as f64).collect();
    let raw_moments: Vec<f64> = raw.iter().map(|k| k.sum / n as f64).collect();
    let variance = central[1];
    let sd = variance.sqrt();
    let standardized_moments: Vec<f64> = central
        .iter()
        .enumerate()
        .map(|(i, &c)| c / sd.powi(i as i32 + 1))
        .collect();
    let ks = ks_distance(samples)?;
    Ok(CLTReport {
        mean,
        variance,
        skewness: standardized_moments[2],
        excess_kurtosis: standardized_moments[3] - 3.0,
        standardized_moments,
        raw_moments,
        ks,
        histogram: Histogram::build(samples),
        prime_count,
        family_size: n,
        seed,
        runtime_secs: 0.0,
    })
}

/// Monte Carlo estimate of a complex moment with its sampling error.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub std_error: f64,
}

fn estimate(values: impl Iterator<Item = f64>, n: usize) -> MomentEstimate {
    let mut sum = Kahan::new();
    let mut sq = Kahan::new();
    for v in values {
        sum.add(v);
        sq.add(v * v);
    }
    let mean = sum.sum / n as f64;
    let var = (sq.sum / n as f64 - mean * mean).max(0.0);
    MomentEstimate {
        value: mean,
        std_error: (var / n as f64).sqrt(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexMoments {
    pub order: u32,
    pub raw_re: MomentEstimate,
    pub raw_im: MomentEstimate,
    pub re_moment: MomentEstimate,
    pub im_moment: MomentEstimate,
}

/// `a`-th moments of the complex sums: raw `E[S^a]` (→ 0 for non-self-dual
/// inputs) and the real/imaginary marginal moments
/// (→ `δ_{2|a}·a!/(2^a (a/2)!)`).
pub fn complex_moments(sums: &[Complex<f64>], a: u32) -> Result<ComplexMoments> {
    if a == 0 || a > 8 {
        return Err(Error::InvalidParameter(format!(
            "moment order must be in 1..=8, got {a}"
        )));
    }
    if sums.len() < 2 {
        return Err(Error::InvalidParameter("need at least 2 sums".into()));
    }
    let n = sums.len();
    let powers: Vec<Complex<f64>> = sums.iter().map(|z| z.powu(a)).collect();
    Ok(ComplexMoments {
        order: a,
        raw_re: estimate(powers.iter().map(|z| z.re), n),
        raw_im: estimate(powers.iter().map(|z| z.im), n),
        re_moment: estimate(sums.iter().map(|z| z.re.powi(a as i32)), n),
        im_moment: estimate(sums.iter().map(|z| z.im.powi(a as i32)), n),
    })
}

/// Family wrapper for the complex-moment experiment; rejects self-dual test
/// functions (their imaginary parts are identically zero — use
/// [`simulate_family`]).
pub fn complex_moments_for(
    rs: &RootSystem,
    cfg: &FamilyConfig,
    orders: &[u32],
) -> Result<Vec<ComplexMoments>> {
    if cfg.test_fn.is_self_dual() {
        return Err(Error::InvalidParameter(
            "complex moments need a non-self-dual test function".into(),
        ));
    }
    let fam = member_sums(rs, cfg)?;
    orders
        .iter()
        .map(|&a| complex_moments(&fam.sums, a))
        .collect()
}

/// Gaussian limit `δ_{2|a}·a!/(2^a (a/2)!)` of the marginal `a`-th moments
/// (moments of `N(0, 1/2)`).
pub fn half_gaussian_moment(a: u32) -> f64 {
    if a % 2 == 1 {
        return 0.0;
    }
    let fact = |m: u32| -> f64 { (1..=m).map(|i| i as f64).product() };
    fact(a) / (2f64.powi(a as i32) * fact(a / 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::build_root_system;

    fn rs(s: &str) -> RootSystem {
        build_root_system(GroupType::parse(s).unwrap()).unwrap()
    }

    fn chi_e1(c2: &RootSystem) -> TestFunction {
        let e = CharExpansion::single(c2, Weight::from_ints(&[1, 0])).unwrap();
        TestFunction::self_dual(c2, e).unwrap()
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(sieve_primes(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).unwrap(), vec![2]);
        assert_eq!(sieve_primes(10_000).unwrap().len(), 1229);
        assert!(sieve_primes(1).is_err());
    }

    #[test]
    fn test_function_constraints() {
        let c2 = rs("C2");
        // Constant term forbidden.
        let with_const = CharExpansion::new(
            &c2,
            [(Weight::zero(2), 0.6), (Weight::from_ints(&[1, 0]), 0.8)],
        )
        .unwrap();
        assert!(TestFunction::self_dual(&c2, with_const).is_err());
        // Unit variance enforced.
        let off = CharExpansion::single(&c2, Weight::from_ints(&[1, 0]))
            .unwrap();
        let scaled = CharExpansion::new(&c2, [(Weight::from_ints(&[1, 0]), 0.9)]).unwrap();
        assert!(TestFunction::self_dual(&c2, off.clone()).is_ok());
        assert!(TestFunction::self_dual(&c2, scaled).is_err());
        // Non-self-dual rejected in self-dual mode, allowed in complex mode.
        let a2 = rs("A2");
        let chi = CharExpansion::single(&a2, a2.fundamental_weights()[0].clone()).unwrap();
        assert!(TestFunction::self_dual(&a2, chi.clone()).is_err());
        let t = TestFunction::complex(&a2, chi).unwrap();
        assert!(!t.is_self_dual());
    }

    #[test]
    fn ks_point_mass_and_gaussian() {
        assert!((ks_distance(&[0.0, 0.0, 0.0]).unwrap() - 0.5).abs() < 1e-12);
        assert!(ks_distance(&[1.0]).is_err());

        // Box-Muller standard normals.
        let mut rng = substream(99, 0);
        let mut xs = Vec::with_capacity(100_000);
        while xs.len() < 100_000 {
            let u1: f64 = rng.gen::<f64>().max(1e-300);
            let u2: f64 = rng.gen();
            let r = (-2.0 * u1.ln()).sqrt();
            xs.push(r * (std::f64::consts::TAU * u2).cos());
            xs.push(r * (std::f64::consts::TAU * u2).sin());
        }
        xs.truncate(100_000);
        assert!(ks_distance(&xs).unwrap() <= 0.006);

        let unif: Vec<f64> = (0..100_000)
            .map(|i| -1.0 + 2.0 * (i as f64 + 0.5) / 100_000.0)
            .collect();
        assert!(ks_distance(&unif).unwrap() >= 0.05);
    }

    #[test]
    fn half_gaussian_moments_table() {
        assert_eq!(half_gaussian_moment(1), 0.0);
        assert!((half_gaussian_moment(2) - 0.5).abs() < 1e-15);
        assert!((half_gaussian_moment(4) - 0.75).abs() < 1e-15);
        assert_eq!(half_gaussian_moment(3), 0.0);
    }

    #[test]
    fn histogram_counts_sum() {
        let samples = vec![-5.0, -3.9, 0.0, 1.0, 3.99, 4.0, 7.0];
        let h = Histogram::build(&samples);
        assert_eq!(h.counts.iter().sum::<u64>() as usize, samples.len());
        assert_eq!(h.counts[0], 1);
        assert_eq!(*h.counts.last().unwrap(), 2);
        assert_eq!(h.edges.len(), 62);
    }

    #[test]
    fn small_family_statistics() {
        let c2 = rs("C2");
        let cfg = FamilyConfig {
            group: c2.group_type(),
            test_fn: chi_e1(&c2),
            x: 300,
            family_size: 2000,
            sampling: SamplingMode::SatoTateOnly,
            seed: 5,
        };
        let rep = simulate_family(&c2, &cfg).unwrap();
        assert_eq!(rep.family_size, 2000);
        assert_eq!(rep.prime_count, 62);
        assert!(rep.mean.abs() < 0.1, "mean {}", rep.mean);
        assert!((rep.variance - 1.0).abs() < 0.12, "var {}", rep.variance);
        assert!(rep.ks < 0.05, "ks {}", rep.ks);
        assert_eq!(
            rep.histogram.counts.iter().sum::<u64>(),
            cfg.family_size as u64
        );
    }

    #[test]
    fn determinism_across_thread_counts() {
        let c2 = rs("C2");
        let cfg = FamilyConfig {
            group: c2.group_type(),
            test_fn: chi_e1(&c2),
            x: 100,
            family_size: 400,
            sampling: SamplingMode::SatoTateOnly,
            seed: 17,
        };
        let base = simulate_family(&c2, &cfg).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let single = pool.install(|| simulate_family(&c2, &cfg)).unwrap();
        assert_eq!(
            serde_json::to_string(&base).unwrap(),
            serde_json::to_string(&single).unwrap()
        );
    }

    #[test]
    fn plancherel_mode_close_to_st_for_large_primes() {
        // Restrict to primes above the cutoff: both modes draw identically.
        let c2 = rs("C2");
        let mk = |sampling| FamilyConfig {
            group: c2.group_type(),
            test_fn: chi_e1(&c2),
            x: 50,
            family_size: 300,
            sampling,
            seed: 23,
        };
        let st = member_sums(&c2, &mk(SamplingMode::SatoTateOnly)).unwrap();
        let pl = member_sums(&c2, &mk(SamplingMode::PlancherelPerPrime)).unwrap();
        // Small primes differ (O(1/p) bias) but the distributions stay close.
        let mean = |v: &FamilySums| {
            v.sums.iter().map(|z| z.re).sum::<f64>() / v.sums.len() as f64
        };
        assert!((mean(&st) - mean(&pl)).abs() < 0.5);
    }

    #[test]
    fn complex_moments_smoke_a2() {
        let a2 = rs("A2");
        let chi = CharExpansion::single(&a2, a2.fundamental_weights()[0].clone()).unwrap();
        let cfg = FamilyConfig {
            group: a2.group_type(),
            test_fn: TestFunction::complex(&a2, chi).unwrap(),
            x: 300,
            family_size: 2000,
            sampling: SamplingMode::SatoTateOnly,
            seed: 31,
        };
        let ms = complex_moments_for(&a2, &cfg, &[1, 2]).unwrap();
        let m1 = &ms[0];
        assert!(m1.raw_re.value.abs() < 4.0 * m1.raw_re.std_error + 0.05);
        let m2 = &ms[1];
        assert!(
            (m2.re_moment.value - 0.5).abs() < 4.0 * m2.re_moment.std_error + 0.05,
            "re2 {}",
            m2.re_moment.value
        );
        assert!(
            m2.raw_re.value.abs() < 4.0 * m2.raw_re.std_error + 0.05,
            "raw2 {}",
            m2.raw_re.value
        );
        // Self-dual input rejected.
        let c2 = rs("C2");
        let cfg2 = FamilyConfig {
            group: c2.group_type(),
            test_fn: chi_e1(&c2),
            x: 100,
            family_size: 200,
            sampling: SamplingMode::SatoTateOnly,
            seed: 1,
        };
        assert!(complex_moments_for(&c2, &cfg2, &[2]).is_err());
    }
}
