//! Sumsets and restricted sumsets, exact comparison against the residues
//! `R`, and the quantities attached to a candidate set `A ⊆ F_p`: the
//! decomposition `p = n² + Δ`, the defect profile `ε`, the remainder `Z` of
//! `(A * A) = 2R + (2·A) + Z`, the remainder `E₂` of
//! `(A ∘ A) = (|A| - 1)δ_0 + 1 + E₂`, and the Paley clique number.
//!
//! Everything here is exact: integers, or rationals where a ratio is asked for.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize, Serializer};

use crate::diffsets::pds_lambda;
use crate::error::{Error, Result};
use crate::field::{isqrt, FSet, PrimeField};
use crate::funcspace::{difference_counts, energy, sum_counts, IntFunction};

/// Which sumset is compared against `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `A + A`.
    Standard,
    /// `A +̂ A`, sums of distinct elements only.
    Restricted,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Standard => "standard",
            Mode::Restricted => "restricted",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Mode::Standard),
            "restricted" => Ok(Mode::Restricted),
            other => Err(Error::InvalidArgument(format!("unknown mode '{other}'"))),
        }
    }
}

/// Serializes a rational as `"num/den"`.
pub fn serialize_rational<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

fn check_field(field: &PrimeField, a: &FSet) -> Result<()> {
    if a.modulus() != field.modulus() {
        return Err(Error::ModulusMismatch { left: a.modulus(), right: field.modulus() });
    }
    Ok(())
}

/// `A + B`.
pub fn sumset(a: &FSet, b: &FSet) -> Result<FSet> {
    let m = a.modulus();
    if m != b.modulus() {
        return Err(Error::ModulusMismatch { left: m, right: b.modulus() });
    }
    let mut mask = vec![false; m];
    for x in a.iter() {
        for y in b.iter() {
            mask[(x + y) % m] = true;
        }
    }
    Ok(FSet::from_mask(&mask))
}

/// `A +̂ A = {a + a' : a, a' ∈ A, a ≠ a'}`.
pub fn restricted_sumset(a: &FSet) -> FSet {
    let m = a.modulus();
    let mut mask = vec![false; m];
    let xs = a.members();
    for (i, &x) in xs.iter().enumerate() {
        for &y in &xs[i + 1..] {
            mask[(x + y) % m] = true;
        }
    }
    FSet::from_mask(&mask)
}

pub fn sumset_for_mode(a: &FSet, mode: Mode) -> FSet {
    match mode {
        Mode::Standard => sumset(a, a).expect("same modulus"),
        Mode::Restricted => restricted_sumset(a),
    }
}

/// `A + A = R` or `A +̂ A = R`.
pub fn represents_r(field: &PrimeField, a: &FSet, mode: Mode) -> bool {
    a.modulus() == field.modulus() && sumset_for_mode(a, mode) == field.residue_set()
}

/// `p = n² + Δ` with `n = ⌊√p⌋` and `1 ≤ Δ ≤ 2n`.
pub fn square_decomposition(p: u64) -> (u64, u64) {
    let n = isqrt(p);
    (n, p - n * n)
}

/// The scalar quantities attached to a nonempty `A ⊆ F_p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumsetDiagnostics {
    pub p: u64,
    pub a: i64,
    pub n: i64,
    pub delta: i64,
    /// `|A ∩ {0}|`.
    pub omega: i64,
    /// `Σ_{x∈A} (χ(2x) - 1)`.
    pub d: i64,
    #[serde(serialize_with = "serialize_rational")]
    pub eta: Rational64,
    /// `a - Δ`.
    pub z: i64,
    /// `|R ∖ (A+A)| / a`.
    #[serde(serialize_with = "serialize_rational")]
    pub zeta1: Rational64,
    /// `Σ_{x ∈ (A+A)∖R} (A*A)(x) / a`.
    #[serde(serialize_with = "serialize_rational")]
    pub zeta2: Rational64,
    /// `max{|R ∖ (A+A)|, Σ_{x ∈ (A+A)∖R} (A*A)(x)}`.
    pub max_defect: i64,
    pub energy: i64,
    /// `E(A) - (2a² - a)`.
    pub e1: i64,
    /// `Σ E₂`.
    pub e2_l1: i64,
    /// `‖E₂‖₂²`.
    pub e2_l2sq: i64,
}

pub fn diagnostics(field: &PrimeField, a: &FSet) -> Result<SumsetDiagnostics> {
    check_field(field, a)?;
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let p = field.p();
    let (n, delta) = square_decomposition(p);
    let size = a.len() as i64;
    let omega = i64::from(a.contains(0));
    let d: i64 = a.iter().map(|x| field.chi(2 * x as i64) - 1).sum();

    let r = field.residue_set();
    let sums = sum_counts(a);
    let aa = FSet::from_mask(&sums.values().iter().map(|&v| v > 0).collect::<Vec<_>>());
    let missing = r.difference(&aa).len() as i64;
    let excess: i64 = aa.difference(&r).iter().map(|x| sums.values()[x]).sum();

    let e = energy(a) as i64;
    let e2 = e2_function(a);
    Ok(SumsetDiagnostics {
        p,
        a: size,
        n: n as i64,
        delta: delta as i64,
        omega,
        d,
        eta: Rational64::new(d, size),
        z: size - delta as i64,
        zeta1: Rational64::new(missing, size),
        zeta2: Rational64::new(excess, size),
        max_defect: missing.max(excess),
        energy: e,
        e1: e - (2 * size * size - size),
        e2_l1: e2.sum(),
        e2_l2sq: e2.norm_sq(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonVariant {
    /// `(A ∘ χ)(x) = a·B(x) + ε(x)`, meaningful when `A + B ⊆ R`.
    Circ,
    /// `(A * χ)(x) = (a - 1)·A(x) + ε(x)`, meaningful when `A - A ⊆ R ⊔ {0}`.
    Star,
}

#[derive(Debug, Clone, Serialize)]
pub struct EpsilonProfile {
    pub variant: EpsilonVariant,
    pub eps: IntFunction,
    /// Whether the hypothesis of the variant holds; the checks below are
    /// `None` when it does not.
    pub precondition: bool,
    pub vanishes_on_support: Option<bool>,
    pub mean: i64,
    pub expected_mean: Option<i64>,
    pub norm_sq: i64,
    pub expected_norm_sq: Option<i64>,
    /// `<ε>² ≤ p‖ε‖₂²`.
    pub cauchy_schwarz: bool,
}

impl EpsilonProfile {
    /// Every applicable check passed (vacuously true when the precondition fails).
    pub fn holds(&self) -> bool {
        self.vanishes_on_support.unwrap_or(true)
            && self.expected_mean.is_none_or(|m| m == self.mean)
            && self.expected_norm_sq.is_none_or(|n| n == self.norm_sq)
            && self.cauchy_schwarz
    }
}

/// The defect function `ε` of `A` (and `B` in the circ variant; ignored for star).
pub fn epsilon_profile(field: &PrimeField, a: &FSet, b: &FSet, variant: EpsilonVariant) -> Result<EpsilonProfile> {
    check_field(field, a)?;
    check_field(field, b)?;
    let p = field.p() as i64;
    let chi = field.chi_function();
    let size = a.len() as i64;
    let r = field.residue_set();
    let (eps, support, precondition, expected_mean, expected_norm) = match variant {
        EpsilonVariant::Circ => {
            let bs = b.len() as i64;
            let eps = a.indicator().convolve_circ(&chi)?.sub(&b.indicator().scale(size))?;
            let pre = sumset(a, b)?.is_subset(&r);
            (eps, b, pre, -size * bs, p * size - size * size - size * size * bs)
        }
        EpsilonVariant::Star => {
            let eps = a.indicator().convolve_star(&chi)?.sub(&a.indicator().scale(size - 1))?;
            let diffs = difference_counts(a);
            let pre = (1..field.modulus()).all(|x| diffs.values()[x] == 0 || r.contains(x));
            (eps, a, pre, -size * (size - 1), p * size - size * size - size * (size - 1).pow(2))
        }
    };
    let mean = eps.sum();
    let norm_sq = eps.norm_sq();
    let vanishes = support.iter().all(|x| eps.values()[x] == 0);
    Ok(EpsilonProfile {
        variant,
        precondition,
        vanishes_on_support: precondition.then_some(vanishes),
        expected_mean: precondition.then_some(expected_mean),
        expected_norm_sq: precondition.then_some(expected_norm),
        cauchy_schwarz: (mean as i128).pow(2) <= p as i128 * norm_sq as i128,
        eps,
        mean,
        norm_sq,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ZReport {
    pub z: IntFunction,
    /// `‖Z‖₁`.
    pub l1: i64,
    /// `<Z>`.
    pub mean: i64,
    /// `a² - 2t - a`.
    pub expected_mean: i64,
    pub restricted_rep: bool,
    /// `Z ≥ 0`, when `A +̂ A = R`.
    pub nonnegative: Option<bool>,
    /// `supp Z ⊆ R`, when `A +̂ A = R`.
    pub support_in_r: Option<bool>,
    /// `‖Z‖₁ = a - Δ`, when `A +̂ A = R`.
    pub l1_matches: Option<bool>,
}

impl ZReport {
    pub fn holds(&self) -> bool {
        self.mean == self.expected_mean
            && self.nonnegative.unwrap_or(true)
            && self.support_in_r.unwrap_or(true)
            && self.l1_matches.unwrap_or(true)
    }
}

/// `Z = A * A - 2R - (2·A)`.
pub fn z_decomposition(field: &PrimeField, a: &FSet) -> Result<ZReport> {
    check_field(field, a)?;
    let r = field.residue_set();
    let two_a = a.dilate(2)?;
    let z = sum_counts(a).sub(&r.indicator().scale(2))?.sub(&two_a.indicator())?;
    let size = a.len() as i64;
    let t = field.t() as i64;
    let rep = represents_r(field, a, Mode::Restricted);
    let (_, delta) = square_decomposition(field.p());
    let l1 = z.l1_norm();
    Ok(ZReport {
        l1,
        mean: z.sum(),
        expected_mean: size * size - 2 * t - size,
        restricted_rep: rep,
        nonnegative: rep.then(|| z.values().iter().all(|&v| v >= 0)),
        support_in_r: rep.then(|| (0..field.modulus()).all(|x| z.values()[x] == 0 || r.contains(x))),
        l1_matches: rep.then_some(l1 == size - delta as i64),
        z,
    })
}

/// `E₂(x) = (A ∘ A)(x) - (|A| - 1)δ_0(x) - 1`.
pub fn e2_function(a: &FSet) -> IntFunction {
    let mut e2 = difference_counts(a).add_constant(-1);
    let m = a.modulus();
    if m > 0 {
        let v0 = e2.values()[0] - (a.len() as i64 - 1);
        e2.set(0, v0);
    }
    e2
}

#[derive(Debug, Clone, Serialize)]
pub struct E2Report {
    pub e2: IntFunction,
    pub sum: i64,
    pub norm_sq: i64,
    pub restricted_rep: bool,
    /// `Σ E₂ = a - Δ`, when `A +̂ A = R`.
    pub sum_matches: Option<bool>,
    /// `‖E₂‖₂² = E₁ + Δ - a`, when `A +̂ A = R`.
    pub norm_matches: Option<bool>,
}

impl E2Report {
    pub fn holds(&self) -> bool {
        self.sum_matches.unwrap_or(true) && self.norm_matches.unwrap_or(true)
    }
}

pub fn e2_decomposition(field: &PrimeField, a: &FSet) -> Result<E2Report> {
    check_field(field, a)?;
    let e2 = e2_function(a);
    let size = a.len() as i64;
    let (_, delta) = square_decomposition(field.p());
    let delta = delta as i64;
    let e1 = energy(a) as i64 - (2 * size * size - size);
    let rep = represents_r(field, a, Mode::Restricted);
    let (sum, norm_sq) = (e2.sum(), e2.norm_sq());
    Ok(E2Report {
        e2,
        sum,
        norm_sq,
        restricted_rep: rep,
        sum_matches: rep.then_some(sum == size - delta),
        norm_matches: rep.then_some(norm_sq == e1 + delta - size),
    })
}

/// Structural facts every `A` with `A +̂ A = R` must satisfy (other than `{0, 1} ⊆ F_3`).
#[derive(Debug, Clone, Serialize)]
pub struct RestrictedStructure {
    pub exceptional: bool,
    /// `|A| = n + 1`.
    pub size_is_n_plus_1: bool,
    /// `3 ≤ Δ ≤ n + 1`.
    pub delta_window: bool,
    /// `|2·A ∩ R| ≤ √(aΔ - 3a + 1) / 2`.
    pub doubled_residue_bound: bool,
    /// `0 ∉ A ⇒ χ(2) = 1 ∧ |A| ≤ 6`, `0 ∈ A ⇒ χ(2) = -1`.
    pub zero_rule: bool,
    /// `λ = 1` perfect difference set.
    pub is_pds_lambda_one: bool,
    pub delta_is_n_plus_1: bool,
    pub z_vanishes: bool,
    pub e2_vanishes: bool,
    /// `E(A) = 2a² - a`.
    pub energy_exact: bool,
    pub z_report_holds: bool,
    pub e2_report_holds: bool,
}

impl RestrictedStructure {
    pub fn holds(&self) -> bool {
        self.exceptional
            || (self.size_is_n_plus_1
                && self.delta_window
                && self.doubled_residue_bound
                && self.zero_rule
                && self.is_pds_lambda_one
                && self.z_report_holds
                && self.e2_report_holds)
    }

    /// The stronger closing picture: `Δ = n + 1`, `Z ≡ 0`, `E₂ ≡ 0`, `E(A) = 2a² - a`.
    pub fn perfect(&self) -> bool {
        self.holds()
            && (self.exceptional
                || (self.delta_is_n_plus_1 && self.z_vanishes && self.e2_vanishes && self.energy_exact))
    }
}

pub fn restricted_structure(field: &PrimeField, a: &FSet) -> Result<RestrictedStructure> {
    check_field(field, a)?;
    let p = field.p();
    let exceptional = p == 3 && a.members() == [0, 1];
    let (n, delta) = square_decomposition(p);
    let (n, delta, size) = (n as i64, delta as i64, a.len() as i64);
    let r = field.residue_set();
    let doubled_in_r = a.dilate(2)?.intersection(&r).len() as i64;
    let rhs = size * delta - 3 * size + 1;
    let zero_rule = if a.contains(0) {
        field.chi(2) == -1
    } else {
        field.chi(2) == 1 && size <= 6
    };
    let z = z_decomposition(field, a)?;
    let e2 = e2_decomposition(field, a)?;
    Ok(RestrictedStructure {
        exceptional,
        size_is_n_plus_1: size == n + 1,
        delta_window: (3..=n + 1).contains(&delta),
        doubled_residue_bound: rhs >= 0 && 4 * doubled_in_r * doubled_in_r <= rhs,
        zero_rule,
        is_pds_lambda_one: pds_lambda(a).lambda == Some(1),
        delta_is_n_plus_1: delta == n + 1,
        z_vanishes: z.z.is_zero(),
        e2_vanishes: e2.e2.is_zero(),
        energy_exact: energy(a) as i64 == 2 * size * size - size,
        z_report_holds: z.holds(),
        e2_report_holds: e2.holds(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CliqueReport {
    pub p: u64,
    /// Whether `p ≡ 1 (mod 4)`; otherwise `R` is not symmetric and only
    /// singletons satisfy `A - A ⊆ R ⊔ {0}`.
    pub symmetric: bool,
    pub size: usize,
    /// Lexicographically least maximum clique.
    pub witness: FSet,
    /// `p ≥ a² + a - 1` (a even) or `p ≥ a² + 2a - 2` (a odd).
    pub bound: u64,
    pub bound_holds: bool,
    pub tight: bool,
}

/// The clique number of the Paley graph, i.e. the largest `A` with
/// `A - A ⊆ R ⊔ {0}`, by branch and bound with greedy-colouring bounds.
pub fn paley_clique(field: &PrimeField) -> CliqueReport {
    let p = field.p();
    let symmetric = p % 4 == 1;
    let witness = if symmetric {
        let adj: Vec<Vec<bool>> = (0..p as i64)
            .map(|x| (0..p as i64).map(|y| x != y && field.chi(x - y) == 1).collect())
            .collect();
        let mut search = CliqueSearch { adj: &adj, best: Vec::new(), current: Vec::new() };
        search.expand((0..p as usize).collect());
        FSet::new(p as usize, search.best).expect("vertices below p")
    } else {
        FSet::new(p as usize, [0]).expect("0 < p")
    };
    let a = witness.len() as u64;
    let bound = if a.is_multiple_of(2) { a * a + a - 1 } else { a * a + 2 * a - 2 };
    CliqueReport { p, symmetric, size: a as usize, witness, bound, bound_holds: p >= bound, tight: p == bound }
}

struct CliqueSearch<'a> {
    adj: &'a [Vec<bool>],
    best: Vec<usize>,
    current: Vec<usize>,
}

impl CliqueSearch<'_> {
    /// Candidates stay in ascending order so that the first maximum clique
    /// reached is the lexicographically least one.
    fn expand(&mut self, candidates: Vec<usize>) {
        if candidates.is_empty() {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            return;
        }
        if self.current.len() + greedy_colour_bound(self.adj, &candidates) <= self.best.len() {
            return;
        }
        for (i, &v) in candidates.iter().enumerate() {
            if self.current.len() + (candidates.len() - i) <= self.best.len() {
                return;
            }
            let next: Vec<usize> = candidates[i + 1..].iter().copied().filter(|&w| self.adj[v][w]).collect();
            self.current.push(v);
            self.expand(next);
            self.current.pop();
        }
    }
}

/// Number of colour classes in a greedy sequential colouring; bounds the clique number.
fn greedy_colour_bound(adj: &[Vec<bool>], vertices: &[usize]) -> usize {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in vertices {
        match classes.iter_mut().find(|c| c.iter().all(|&w| !adj[v][w])) {
            Some(class) => class.push(v),
            None => classes.push(vec![v]),
        }
    }
    classes.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::primes_between;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn set(m: usize, xs: &[usize]) -> FSet {
        FSet::new(m, xs.iter().copied()).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(sumset(&set(3, &[2]), &set(3, &[2])).unwrap().members(), &[1]);
        assert!(sumset(&FSet::empty(5), &set(5, &[1, 2])).unwrap().is_empty());
        assert_eq!(sumset(&set(5, &[0, 1]), &set(5, &[0, 1])).unwrap().members(), &[0, 1, 2]);
        assert!(sumset(&set(5, &[0]), &set(6, &[0])).is_err());
    }

    #[test]
    fn restricted_sumset_examples() {
        assert_eq!(restricted_sumset(&set(3, &[0, 1])).members(), &[1]);
        assert_eq!(restricted_sumset(&set(7, &[3, 5, 6])).members(), &[1, 2, 4]);
        assert!(restricted_sumset(&set(7, &[3])).is_empty());
    }

    #[test]
    fn represents_examples() {
        let f13 = field(13);
        assert!(represents_r(&f13, &set(13, &[0, 1, 3, 9]), Mode::Restricted));
        assert!(represents_r(&f13, &set(13, &[0, 4, 10, 12]), Mode::Restricted));
        assert!(!represents_r(&field(3), &set(3, &[0, 1]), Mode::Standard));
        assert!(represents_r(&field(3), &set(3, &[0, 1]), Mode::Restricted));
        assert!(represents_r(&field(3), &set(3, &[2]), Mode::Standard));
        assert!(!represents_r(&f13, &set(7, &[3, 5, 6]), Mode::Restricted));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("standard".parse::<Mode>().unwrap(), Mode::Standard);
        assert_eq!(Mode::Restricted.to_string(), "restricted");
        assert!("both".parse::<Mode>().is_err());
        assert_eq!(serde_json::to_string(&Mode::Restricted).unwrap(), "\"restricted\"");
    }

    #[test]
    fn square_decomposition_window() {
        for p in primes_between(3, 2000) {
            let (n, delta) = square_decomposition(p);
            assert_eq!(n * n + delta, p);
            assert!(delta >= 1 && delta <= 2 * n);
        }
        assert_eq!(square_decomposition(13), (3, 4));
        assert_eq!(square_decomposition(7), (2, 3));
    }

    #[test]
    fn diagnostics_examples() {
        let d = diagnostics(&field(3), &set(3, &[2])).unwrap();
        assert_eq!((d.zeta1, d.zeta2), (rat(0, 1), rat(0, 1)));

        let d = diagnostics(&field(7), &set(7, &[1, 3])).unwrap();
        assert_eq!(d.zeta1, rat(1, 2));
        assert_eq!(d.zeta2, rat(1, 2));
        assert_eq!(d.max_defect, 1);

        let d = diagnostics(&field(13), &set(13, &[0, 1, 3, 9])).unwrap();
        assert_eq!((d.delta, d.z, d.e1, d.energy), (4, 0, 0, 28));
        assert_eq!((d.n, d.omega), (3, 1));
        assert_eq!(d.e2_l2sq, d.e1 + d.delta - d.a);

        assert_eq!(diagnostics(&field(7), &FSet::empty(7)).unwrap_err(), Error::EmptySet);
        assert!(diagnostics(&field(7), &set(5, &[1])).is_err());

        let json = serde_json::to_value(diagnostics(&field(7), &set(7, &[1, 3])).unwrap()).unwrap();
        assert_eq!(json["zeta1"], "1/2");
    }

    #[test]
    fn d_and_eta_ranges() {
        for p in [7u64, 11, 13] {
            let f = field(p);
            for mask in 1u32..(1 << p) {
                if mask.count_ones() > 4 {
                    continue;
                }
                let a = FSet::new(p as usize, (0..p as usize).filter(|i| mask >> i & 1 == 1)).unwrap();
                let d = diagnostics(&f, &a).unwrap();
                assert!(d.omega == 0 || d.omega == 1);
                assert!(d.d >= -2 * d.a && d.d <= 0);
                assert!(d.eta >= rat(-2, 1) && d.eta <= rat(0, 1));
            }
        }
    }

    #[test]
    fn epsilon_examples() {
        let f3 = field(3);
        let a = set(3, &[2]);
        let e = epsilon_profile(&f3, &a, &a, EpsilonVariant::Circ).unwrap();
        assert!(e.precondition);
        assert_eq!(e.eps.values()[2], 0);
        assert_eq!((e.mean, e.norm_sq), (-1, 1));
        assert!(e.holds());

        let f7 = field(7);
        let a = set(7, &[0, 1]);
        let e = epsilon_profile(&f7, &a, &a, EpsilonVariant::Circ).unwrap();
        assert!(!e.precondition);
        assert_eq!(e.expected_mean, None);
        assert_eq!(e.eps.modulus(), 7);

        let f5 = field(5);
        let a = set(5, &[0, 1]);
        let e = epsilon_profile(&f5, &a, &a, EpsilonVariant::Star).unwrap();
        assert!(e.precondition);
        assert_eq!(e.norm_sq, 4);
        // brute-force ε(x) = Σ_y A(y)χ(x - y) - (a - 1)A(x)
        for x in 0..5i64 {
            let brute = a.iter().map(|y| f5.chi(x - y as i64)).sum::<i64>() - i64::from(a.contains(x as usize));
            assert_eq!(e.eps.at(x), brute);
        }
        assert!(e.holds());
    }

    #[test]
    fn cauchy_schwarz_chain_when_sums_land_in_residues() {
        for p in primes_between(3, 31) {
            let f = field(p);
            let r = f.residue_set();
            for mask in 1u64..(1 << p.min(17)) {
                let a = FSet::new(p as usize, (0..p as usize).filter(|i| mask >> i & 1 == 1)).unwrap();
                if !sumset(&a, &a).unwrap().is_subset(&r) {
                    continue;
                }
                let e = epsilon_profile(&f, &a, &a, EpsilonVariant::Circ).unwrap();
                assert!(e.holds(), "p={p} A={a}");
                let size = a.len() as i128;
                assert!(size.pow(4) <= p as i128 * e.norm_sq as i128);
            }
        }
    }

    #[test]
    fn z_examples() {
        let z = z_decomposition(&field(13), &set(13, &[0, 1, 3, 9])).unwrap();
        assert!(z.z.is_zero());
        assert_eq!(z.l1, 0);
        assert!(z.holds());

        let z = z_decomposition(&field(7), &set(7, &[3, 5, 6])).unwrap();
        assert_eq!(z.l1, 0);
        assert_eq!(z.l1_matches, Some(true));

        let f7 = field(7);
        let z = z_decomposition(&f7, &FSet::empty(7)).unwrap();
        assert_eq!(z.z, f7.residue_set().indicator().scale(-2));
        assert_eq!(z.mean, -6);
        assert!(z.holds());
    }

    #[test]
    fn e2_examples() {
        let e = e2_decomposition(&field(13), &set(13, &[0, 1, 3, 9])).unwrap();
        assert!(e.e2.is_zero());
        assert!(e.holds());

        let a = set(5, &[0, 1]);
        let e = e2_decomposition(&field(5), &a).unwrap();
        let counts = difference_counts(&a);
        for x in 0..5 {
            let expected = counts.values()[x] - if x == 0 { 1 } else { 0 } - 1;
            assert_eq!(e.e2.values()[x], expected);
        }

        let e = e2_decomposition(&field(5), &FSet::empty(5)).unwrap();
        assert_eq!(e.e2.values(), &[0, -1, -1, -1, -1]);
    }

    #[test]
    fn structure_of_known_solutions() {
        for (p, xs) in [(7u64, vec![3, 5, 6]), (13, vec![0, 1, 3, 9]), (13, vec![0, 4, 10, 12])] {
            let s = restricted_structure(&field(p), &set(p as usize, &xs)).unwrap();
            assert!(s.holds() && s.perfect(), "{p} {xs:?}: {s:?}");
        }
        let s = restricted_structure(&field(3), &set(3, &[0, 1])).unwrap();
        assert!(s.exceptional && s.perfect());
    }

    #[test]
    fn paley_clique_examples() {
        let c = paley_clique(&field(5));
        assert_eq!((c.size, c.witness.members()), (2, &[0usize, 1][..]));
        assert!(c.bound_holds && c.tight);
        let c = paley_clique(&field(13));
        assert_eq!(c.size, 3);
        assert!(c.tight);
        let c = paley_clique(&field(3));
        assert_eq!(c.size, 1);
        assert!(!c.symmetric);
    }

    #[test]
    fn paley_clique_matches_brute_force() {
        for p in [5u64, 13, 17, 29] {
            let f = field(p);
            let c = paley_clique(&f);
            let mut best = 0;
            for mask in 1u32..(1 << p.min(17)) {
                let xs: Vec<i64> = (0..p as i64).filter(|i| mask >> i & 1 == 1).collect();
                if xs.len() <= best {
                    continue;
                }
                if xs.iter().all(|&x| xs.iter().all(|&y| x == y || f.chi(x - y) == 1)) {
                    best = xs.len();
                }
            }
            if p <= 17 {
                assert_eq!(c.size, best, "p={p}");
            } else {
                assert!(c.size >= best);
            }
            let w = c.witness.members();
            assert!(w.iter().all(|&x| w.iter().all(|&y| x == y || f.chi(x as i64 - y as i64) == 1)));
        }
    }
}
