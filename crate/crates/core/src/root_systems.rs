//! Exact combinatorial data of irreducible root systems and their Weyl groups.
//!
//! Coordinates follow the torus parametrizations used throughout the rest of
//! the crate: classical types use the orthogonal `e_i` basis (type `A_n`
//! reduced to `n` free coordinates with `e_{n+1} = -(e_1+...+e_n)`), `G2` uses
//! the two-angle `GL_2`-style coordinates in which the six positive roots act
//! as `θ1-θ2, -θ1+2θ2, 2θ1-θ2, θ1, θ2, θ1+θ2`, and `F4` the standard
//! half-integral `e_i` realization.
//!
//! Every weight is stored as a vector of *doubled* integer coordinates so
//! that half-integral objects (ρ for odd orthogonal types, spin weights,
//! the short `F4` roots) stay exact. Weyl elements are dense matrices on the
//! doubled lattice, also stored doubled so that composition and application
//! are exact integer operations.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::characters::WeightMultiplicityTable;
use crate::error::{Error, Result};

/// Default cap on the enumerated Weyl group order.
pub const DEFAULT_WEYL_CAP: u128 = 50_000;

/// Cartan family of a split simple group type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    G2,
    F4,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::G2 => "G2",
            Family::F4 => "F4",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A family together with a rank, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupType {
    family: Family,
    rank: usize,
    #[serde(default = "default_cap")]
    cap: u128,
}

fn default_cap() -> u128 {
    DEFAULT_WEYL_CAP
}

impl GroupType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        Self::with_cap(family, rank, DEFAULT_WEYL_CAP)
    }

    pub fn with_cap(family: Family, rank: usize, cap: u128) -> Result<Self> {
        let min = match family {
            Family::A => 1,
            Family::B | Family::C => 2,
            Family::D => 3,
            Family::G2 => 2,
            Family::F4 => 4,
        };
        let fixed = matches!(family, Family::G2 | Family::F4);
        if rank < min || (fixed && rank != min) {
            return Err(Error::InvalidRank {
                family: family.as_str(),
                rank,
                reason: if fixed {
                    format!("rank is fixed at {min}")
                } else {
                    format!("minimum rank is {min}")
                },
            });
        }
        let t = GroupType { family, rank, cap };
        let order = t.weyl_order();
        if order > cap {
            return Err(Error::WeylCapExceeded { order, cap });
        }
        Ok(t)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cap(&self) -> u128 {
        self.cap
    }

    /// Classical Weyl group order.
    pub fn weyl_order(&self) -> u128 {
        let fact = |n: usize| -> u128 { (1..=n as u128).product::<u128>().max(1) };
        let n = self.rank;
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u128 << n) * fact(n),
            Family::D => (1u128 << (n - 1)) * fact(n),
            Family::G2 => 12,
            Family::F4 => 1152,
        }
    }

    /// Parses strings like `C2`, `A7`, `G2`, `F4`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = || Error::InvalidParameter(format!("unrecognized group type `{s}`"));
        if s.eq_ignore_ascii_case("G2") {
            return GroupType::new(Family::G2, 2);
        }
        if s.eq_ignore_ascii_case("F4") {
            return GroupType::new(Family::F4, 4);
        }
        let (fam, rest) = s.split_at(1);
        let family = match fam {
            "A" | "a" => Family::A,
            "B" | "b" => Family::B,
            "C" | "c" => Family::C,
            "D" | "d" => Family::D,
            _ => return Err(err()),
        };
        let rank: usize = rest.parse().map_err(|_| err())?;
        GroupType::new(family, rank)
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::G2 | Family::F4 => write!(f, "{}", self.family),
            _ => write!(f, "{}{}", self.family, self.rank),
        }
    }
}

/// Weight in doubled integer coordinates: the stored vector is `2λ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight {
    coords2: Vec<i64>,
}

impl Weight {
    /// Weight with the given integral coordinates.
    pub fn from_ints(coords: &[i64]) -> Self {
        Weight {
            coords2: coords.iter().map(|c| 2 * c).collect(),
        }
    }

    /// Weight from doubled coordinates (allows half-integral entries).
    pub fn from_doubled(coords2: Vec<i64>) -> Self {
        Weight { coords2 }
    }

    pub fn zero(rank: usize) -> Self {
        Weight {
            coords2: vec![0; rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coords2.len()
    }

    pub fn coords2(&self) -> &[i64] {
        &self.coords2
    }

    pub fn is_zero(&self) -> bool {
        self.coords2.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        Weight {
            coords2: self.coords2.iter().map(|&c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Weight) -> Self {
        Weight {
            coords2: self
                .coords2
                .iter()
                .zip(&other.coords2)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Weight) -> Self {
        Weight {
            coords2: self
                .coords2
                .iter()
                .zip(&other.coords2)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Weight {
            coords2: self.coords2.iter().map(|&c| k * c).collect(),
        }
    }

    pub fn max_abs_coord2(&self) -> i64 {
        self.coords2.iter().map(|c| c.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords2.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if c % 2 == 0 {
                write!(f, "{}", c / 2)?;
            } else {
                write!(f, "{c}/2")?;
            }
        }
        write!(f, ")")
    }
}

/// Coroot functional, stored in ordinary (undoubled) dual coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Coroot {
    coords: Vec<i64>,
}

impl Coroot {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Canonical pairing `⟨λ, α∨⟩`, exact.
    pub fn pair(&self, w: &Weight) -> i64 {
        let d: i64 = self
            .coords
            .iter()
            .zip(w.coords2())
            .map(|(a, b)| a * b)
            .sum();
        debug_assert!(d % 2 == 0, "weight outside the lattice paired with coroot");
        d / 2
    }
}

/// Weyl group element: doubled matrix on doubled weight coordinates plus sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    /// Row-major `2·M` where `M` is the action on weight coordinates.
    mat2: Vec<i64>,
    sign: i8,
    rank: usize,
}

impl WeylElement {
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn mat2(&self) -> &[i64] {
        &self.mat2
    }

    pub fn identity(rank: usize) -> Self {
        let mut mat2 = vec![0i64; rank * rank];
        for i in 0..rank {
            mat2[i * rank + i] = 2;
        }
        WeylElement {
            mat2,
            sign: 1,
            rank,
        }
    }

    pub fn apply(&self, w: &Weight) -> Weight {
        let r = self.rank;
        let mut out = vec![0i64; r];
        for i in 0..r {
            let mut acc = 0i64;
            for j in 0..r {
                acc += self.mat2[i * r + j] * w.coords2()[j];
            }
            debug_assert!(acc % 2 == 0, "Weyl action left the doubled lattice");
            out[i] = acc / 2;
        }
        Weight::from_doubled(out)
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let r = self.rank;
        let mut mat2 = vec![0i64; r * r];
        for i in 0..r {
            for j in 0..r {
                let mut acc = 0i64;
                for k in 0..r {
                    acc += self.mat2[i * r + k] * other.mat2[k * r + j];
                }
                debug_assert!(acc % 2 == 0);
                mat2[i * r + j] = acc / 2;
            }
        }
        WeylElement {
            mat2,
            sign: self.sign * other.sign,
            rank: r,
        }
    }

    /// Determinant of the action matrix, computed exactly.
    pub fn det(&self) -> i64 {
        // Bareiss on the doubled matrix, then divide by 2^rank.
        let r = self.rank;
        let mut m: Vec<i128> = self.mat2.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..r {
            if m[k * r + k] == 0 {
                let Some(p) = (k + 1..r).find(|&i| m[i * r + k] != 0) else {
                    return 0;
                };
                for j in 0..r {
                    m.swap(k * r + j, p * r + j);
                }
                sign = -sign;
            }
            for i in k + 1..r {
                for j in k + 1..r {
                    m[i * r + j] = (m[i * r + j] * m[k * r + k] - m[i * r + k] * m[k * r + j]) / prev;
                }
                m[i * r + k] = 0;
            }
            prev = m[k * r + k];
        }
        let det2 = sign * m[(r - 1) * r + (r - 1)];
        (det2 >> r) as i64
    }
}

/// Immutable root datum plus enumerated Weyl group.
///
/// Construction is single-threaded; afterwards the structure is shared
/// freely (the internal multiplicity memo is behind a lock).
#[derive(Debug)]
pub struct RootSystem {
    group_type: GroupType,
    simple_roots: Vec<Weight>,
    simple_coroots: Vec<Coroot>,
    positive_roots: Vec<Weight>,
    positive_coroots: Vec<Coroot>,
    rho: Weight,
    fundamental_weights: Vec<Weight>,
    weyl_elements: Vec<WeylElement>,
    longest_element_index: usize,
    /// Inverse of the simple-root matrix: row `i` is the fundamental
    /// coweight functional extracting the coefficient of `α_i`.
    inv_simple: Vec<Vec<Ratio<i64>>>,
    pub(crate) mult_cache: RwLock<HashMap<Weight, std::sync::Arc<WeightMultiplicityTable>>>,
}

/// Builds the root system for a validated group type.
pub fn build_root_system(t: GroupType) -> Result<RootSystem> {
    RootSystem::new(t)
}

impl RootSystem {
    pub fn new(t: GroupType) -> Result<Self> {
        let rank = t.rank();
        let (sr2, scv) = simple_data(t.family(), rank);
        let simple_roots: Vec<Weight> = sr2.into_iter().map(Weight::from_doubled).collect();
        let simple_coroots: Vec<Coroot> = scv.into_iter().map(|coords| Coroot { coords }).collect();

        let inv_simple = invert_rational(&matrix_from_columns(&simple_roots, rank))
            .expect("simple roots form a basis");

        // Close the set of (root, coroot) pairs under simple reflections.
        let mut all: Vec<(Weight, Coroot)> = Vec::new();
        let mut seen: HashMap<Weight, usize> = HashMap::new();
        let mut queue: Vec<usize> = Vec::new();
        for (a, cv) in simple_roots.iter().zip(&simple_coroots) {
            if !seen.contains_key(a) {
                seen.insert(a.clone(), all.len());
                queue.push(all.len());
                all.push((a.clone(), cv.clone()));
            }
        }
        while let Some(idx) = queue.pop() {
            let (beta, beta_cv) = all[idx].clone();
            for (a, cv) in simple_roots.iter().zip(&simple_coroots) {
                let k = cv.pair(&beta);
                let refl = beta.sub(&a.scale(k));
                if !seen.contains_key(&refl) {
                    let ka = pair_root_coroot(a, &beta_cv);
                    let refl_cv = Coroot {
                        coords: beta_cv
                            .coords
                            .iter()
                            .zip(cv.coords())
                            .map(|(b, c)| b - ka * c)
                            .collect(),
                    };
                    seen.insert(refl.clone(), all.len());
                    queue.push(all.len());
                    all.push((refl, refl_cv));
                }
            }
        }

        let mut positive: Vec<(Weight, Coroot)> = all
            .iter()
            .filter(|(beta, _)| {
                let c = coeffs_in_basis(&inv_simple, beta);
                c.iter().sum::<Ratio<i64>>() > Ratio::zero()
            })
            .cloned()
            .collect();
        positive.sort_by_key(|(beta, _)| {
            let c = coeffs_in_basis(&inv_simple, beta);
            let h: Ratio<i64> = c.iter().sum();
            (h.to_integer_lossy(), beta.clone())
        });
        let expected = positive_root_count(t.family(), rank);
        assert_eq!(
            positive.len(),
            expected,
            "positive root count mismatch for {t}"
        );

        let mut rho2 = vec![0i64; rank];
        for (beta, _) in &positive {
            for (r, c) in rho2.iter_mut().zip(beta.coords2()) {
                *r += c;
            }
        }
        assert!(rho2.iter().all(|c| c % 2 == 0));
        let rho = Weight::from_doubled(rho2.iter().map(|c| c / 2).collect());

        let fundamental_weights = solve_fundamental_weights(&simple_coroots, rank);
        {
            // ρ must equal the sum of fundamental weights.
            let mut s = Weight::zero(rank);
            for w in &fundamental_weights {
                s = s.add(w);
            }
            assert_eq!(s, rho, "rho != sum of fundamental weights for {t}");
        }

        // Weyl group closure from the simple reflections.
        let generators: Vec<WeylElement> = simple_roots
            .iter()
            .zip(&simple_coroots)
            .map(|(a, cv)| {
                let mut mat2 = vec![0i64; rank * rank];
                for i in 0..rank {
                    for j in 0..rank {
                        mat2[i * rank + j] =
                            if i == j { 2 } else { 0 } - a.coords2()[i] * cv.coords()[j];
                    }
                }
                WeylElement {
                    mat2,
                    sign: -1,
                    rank,
                }
            })
            .collect();
        let mut weyl_elements = vec![WeylElement::identity(rank)];
        let mut windex: HashMap<Vec<i64>, usize> = HashMap::new();
        windex.insert(weyl_elements[0].mat2.clone(), 0);
        let mut head = 0;
        while head < weyl_elements.len() {
            let w = weyl_elements[head].clone();
            head += 1;
            for g in &generators {
                let next = w.compose(g);
                if !windex.contains_key(&next.mat2) {
                    if weyl_elements.len() as u128 >= t.cap() {
                        return Err(Error::WeylCapExceeded {
                            order: t.weyl_order(),
                            cap: t.cap(),
                        });
                    }
                    windex.insert(next.mat2.clone(), weyl_elements.len());
                    weyl_elements.push(next);
                }
            }
        }
        assert_eq!(
            weyl_elements.len() as u128,
            t.weyl_order(),
            "Weyl closure size mismatch for {t}"
        );

        let longest_element_index = weyl_elements
            .iter()
            .position(|w| {
                let wr = w.apply(&rho);
                simple_coroots.iter().all(|cv| cv.pair(&wr) < 0)
            })
            .expect("longest element exists");

        let (positive_roots, positive_coroots): (Vec<_>, Vec<_>) = positive.into_iter().unzip();

        Ok(RootSystem {
            group_type: t,
            simple_roots,
            simple_coroots,
            positive_roots,
            positive_coroots,
            rho,
            fundamental_weights,
            weyl_elements,
            longest_element_index,
            inv_simple,
            mult_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn group_type(&self) -> GroupType {
        self.group_type
    }

    pub fn rank(&self) -> usize {
        self.group_type.rank()
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl_elements.len()
    }

    pub fn weyl_elements(&self) -> &[WeylElement] {
        &self.weyl_elements
    }

    pub fn longest_element_index(&self) -> usize {
        self.longest_element_index
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[Coroot] {
        &self.simple_coroots
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    pub fn positive_coroots(&self) -> &[Coroot] {
        &self.positive_coroots
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn fundamental_weights(&self) -> &[Weight] {
        &self.fundamental_weights
    }

    /// Checks that all simple-coroot pairings of `w` are integral.
    pub fn check_in_lattice(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank() {
            return Err(Error::InvalidParameter(format!(
                "weight rank {} does not match root system rank {}",
                w.rank(),
                self.rank()
            )));
        }
        for cv in &self.simple_coroots {
            let d: i64 = cv
                .coords()
                .iter()
                .zip(w.coords2())
                .map(|(a, b)| a * b)
                .sum();
            if d % 2 != 0 {
                return Err(Error::InvalidParameter(format!(
                    "weight {w} lies outside the weight lattice of {}",
                    self.group_type
                )));
            }
        }
        Ok(())
    }

    pub fn is_dominant(&self, w: &Weight) -> bool {
        self.simple_coroots.iter().all(|cv| cv.pair(w) >= 0)
    }

    fn ensure_dominant(&self, w: &Weight) -> Result<()> {
        self.check_in_lattice(w)?;
        if self.is_dominant(w) {
            Ok(())
        } else {
            Err(Error::NonDominant(w.coords2().to_vec()))
        }
    }

    /// Unique dominant representative of the Weyl orbit of `w`.
    pub fn dominantize(&self, w: &Weight) -> Weight {
        let mut cur = w.clone();
        loop {
            let mut moved = false;
            for (a, cv) in self.simple_roots.iter().zip(&self.simple_coroots) {
                let k = cv.pair(&cur);
                if k < 0 {
                    cur = cur.sub(&a.scale(k));
                    moved = true;
                }
            }
            if !moved {
                return cur;
            }
        }
    }

    /// Full Weyl orbit of a dominant weight, sorted for determinism.
    pub fn weyl_orbit(&self, lam: &Weight) -> Result<Vec<Weight>> {
        self.ensure_dominant(lam)?;
        let mut orbit: std::collections::BTreeSet<Weight> = std::collections::BTreeSet::new();
        let mut queue = vec![lam.clone()];
        orbit.insert(lam.clone());
        while let Some(w) = queue.pop() {
            for (a, cv) in self.simple_roots.iter().zip(&self.simple_coroots) {
                let k = cv.pair(&w);
                if k != 0 {
                    let r = w.sub(&a.scale(k));
                    if orbit.insert(r.clone()) {
                        queue.push(r);
                    }
                }
            }
        }
        Ok(orbit.into_iter().collect())
    }

    /// Coefficients of `w` in the simple-root basis (rational, exact).
    pub fn simple_root_coeffs(&self, w: &Weight) -> Vec<Ratio<i64>> {
        coeffs_in_basis(&self.inv_simple, w)
    }

    /// `μ ⪯ λ`: true iff `λ - μ` is a nonnegative integer combination of
    /// simple roots. Total on all pairs; callers normally pass dominant ones.
    pub fn dominance_leq(&self, mu: &Weight, lam: &Weight) -> bool {
        let diff = lam.sub(mu);
        self.simple_root_coeffs(&diff).iter().all(|c| {
            *c >= Ratio::zero() && c.is_integer()
        })
    }

    /// Whether `-1` is an element of the Weyl group.
    pub fn minus_one_in_weyl(&self) -> bool {
        let r = self.rank();
        let mut neg = vec![0i64; r * r];
        for i in 0..r {
            neg[i * r + i] = -2;
        }
        self.weyl_elements.iter().any(|w| w.mat2 == neg)
    }

    /// Highest weight of the contragredient representation: `-w0·λ`.
    pub fn dual_weight(&self, lam: &Weight) -> Result<Weight> {
        self.ensure_dominant(lam)?;
        Ok(self.dominantize(&lam.neg()))
    }

    /// Height function `‖λ‖ = max_w |wλ|` in doubled sup-norm coordinates.
    ///
    /// Housed here for completeness; it drives no further logic in this crate.
    pub fn height_norm2(&self, w: &Weight) -> i64 {
        self.weyl_elements
            .iter()
            .map(|e| e.apply(w).max_abs_coord2())
            .max()
            .unwrap_or(0)
    }

    /// Largest doubled coordinate over the orbit of `w` (bandwidth helper).
    pub fn max_abs_coord2_in_orbit(&self, w: &Weight) -> i64 {
        self.height_norm2(w)
    }

    /// W-invariant symmetric form `Σ_{α>0} ⟨x,α∨⟩⟨y,α∨⟩`, exact.
    pub fn invariant_form(&self, x: &Weight, y: &Weight) -> i128 {
        self.positive_coroots
            .iter()
            .map(|cv| cv.pair(x) as i128 * cv.pair(y) as i128)
            .sum()
    }

    /// JSON dump of the exact root data, for external cross-checking.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "group": self.group_type.to_string(),
            "rank": self.rank(),
            "coordinates": "doubled integers (stored vector is 2*lambda)",
            "simple_roots": self.simple_roots.iter().map(|w| w.coords2().to_vec()).collect::<Vec<_>>(),
            "positive_roots": self.positive_roots.iter().map(|w| w.coords2().to_vec()).collect::<Vec<_>>(),
            "simple_coroots": self.simple_coroots.iter().map(|c| c.coords().to_vec()).collect::<Vec<_>>(),
            "rho": self.rho.coords2().to_vec(),
            "fundamental_weights": self.fundamental_weights.iter().map(|w| w.coords2().to_vec()).collect::<Vec<_>>(),
            "weyl_order": self.weyl_order(),
            "epsilon": self.weyl_elements.iter().map(|w| w.sign() as i64).collect::<Vec<_>>(),
            "minus_one_in_weyl": self.minus_one_in_weyl(),
            "longest_element_index": self.longest_element_index,
        })
    }
}

fn pair_root_coroot(root: &Weight, cv: &Coroot) -> i64 {
    cv.pair(root)
}

fn positive_root_count(family: Family, n: usize) -> usize {
    match family {
        Family::A => n * (n + 1) / 2,
        Family::B | Family::C => n * n,
        Family::D => n * (n - 1),
        Family::G2 => 6,
        Family::F4 => 24,
    }
}

/// Simple roots (doubled coordinates) and simple coroots per family.
fn simple_data(family: Family, n: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut roots2 = Vec::new();
    let mut coroots = Vec::new();
    let unit = |i: usize, v: i64| -> Vec<i64> {
        let mut x = vec![0i64; n];
        x[i] = v;
        x
    };
    let diff = |i: usize, v: i64| -> Vec<i64> {
        let mut x = vec![0i64; n];
        x[i] = v;
        x[i + 1] = -v;
        x
    };
    match family {
        Family::A => {
            // Reduced coordinates: e_j -> ε_j (j <= n), e_{n+1} -> -(ε_1+...+ε_n).
            for j in 0..n.saturating_sub(1) {
                roots2.push(diff(j, 2));
                coroots.push(diff(j, 1));
            }
            let mut last = vec![2i64; n];
            last[n - 1] = 4;
            roots2.push(last);
            coroots.push(unit(n - 1, 1));
        }
        Family::B => {
            for j in 0..n - 1 {
                roots2.push(diff(j, 2));
                coroots.push(diff(j, 1));
            }
            roots2.push(unit(n - 1, 2));
            coroots.push(unit(n - 1, 2));
        }
        Family::C => {
            for j in 0..n - 1 {
                roots2.push(diff(j, 2));
                coroots.push(diff(j, 1));
            }
            roots2.push(unit(n - 1, 4));
            coroots.push(unit(n - 1, 1));
        }
        Family::D => {
            for j in 0..n - 1 {
                roots2.push(diff(j, 2));
                coroots.push(diff(j, 1));
            }
            let mut r = vec![0i64; n];
            r[n - 2] = 2;
            r[n - 1] = 2;
            roots2.push(r);
            let mut c = vec![0i64; n];
            c[n - 2] = 1;
            c[n - 1] = 1;
            coroots.push(c);
        }
        Family::G2 => {
            // Two-angle coordinates of the dual torus: short simple root
            // θ1-θ2, long simple root -θ1+2θ2.
            roots2.push(vec![2, -2]);
            coroots.push(vec![1, -1]);
            roots2.push(vec![-2, 4]);
            coroots.push(vec![0, 1]);
        }
        Family::F4 => {
            roots2.push(vec![0, 2, -2, 0]);
            coroots.push(vec![0, 1, -1, 0]);
            roots2.push(vec![0, 0, 2, -2]);
            coroots.push(vec![0, 0, 1, -1]);
            roots2.push(vec![0, 0, 0, 2]);
            coroots.push(vec![0, 0, 0, 2]);
            roots2.push(vec![1, -1, -1, -1]);
            coroots.push(vec![1, -1, -1, -1]);
        }
    }
    (roots2, coroots)
}

/// Matrix whose column `i` is the doubled coordinates of `basis[i]`.
fn matrix_from_columns(basis: &[Weight], rank: usize) -> Vec<Vec<Ratio<i64>>> {
    let mut m = vec![vec![Ratio::zero(); rank]; rank];
    for (i, b) in basis.iter().enumerate() {
        for (r, &c) in b.coords2().iter().enumerate() {
            m[r][i] = Ratio::new(c, 2);
        }
    }
    m
}

fn invert_rational(m: &[Vec<Ratio<i64>>]) -> Option<Vec<Vec<Ratio<i64>>>> {
    let n = m.len();
    let mut a: Vec<Vec<Ratio<i64>>> = m.to_vec();
    let mut inv = vec![vec![Ratio::zero(); n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = Ratio::new(1, 1);
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..n {
                    let ac = a[col][j];
                    let ic = inv[col][j];
                    a[r][j] -= f * ac;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    Some(inv)
}

fn coeffs_in_basis(inv: &[Vec<Ratio<i64>>], w: &Weight) -> Vec<Ratio<i64>> {
    inv.iter()
        .map(|row| {
            row.iter()
                .zip(w.coords2())
                .map(|(r, &c)| *r * Ratio::new(c, 2))
                .sum()
        })
        .collect()
}

fn solve_fundamental_weights(coroots: &[Coroot], rank: usize) -> Vec<Weight> {
    // Solve ⟨ω_i, α_j∨⟩ = δ_ij for the doubled coordinates of ω_i.
    let m: Vec<Vec<Ratio<i64>>> = (0..rank)
        .map(|j| {
            (0..rank)
                .map(|k| Ratio::new(coroots[j].coords()[k], 2))
                .collect()
        })
        .collect();
    let inv = invert_rational(&m).expect("coroots form a basis");
    (0..rank)
        .map(|i| {
            let coords2: Vec<i64> = (0..rank)
                .map(|k| {
                    let v = inv[k][i];
                    assert!(v.is_integer(), "fundamental weight not half-integral");
                    v.to_integer()
                })
                .collect();
            Weight::from_doubled(coords2)
        })
        .collect()
}

trait RatioExt {
    fn to_integer_lossy(&self) -> i64;
}

impl RatioExt for Ratio<i64> {
    fn to_integer_lossy(&self) -> i64 {
        self.numer() / self.denom()
    }
}
