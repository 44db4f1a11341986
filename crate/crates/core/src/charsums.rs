//! Multiplicative characters of `F_p` and the character sums built on them:
//! Gauss and Jacobi sums, Weil-type products of shifted Legendre symbols,
//! the bilinear sums `σ(A, B)`, and the exact convolution identities that
//! follow from `(χ ∘ χ)(x) = pδ_0(x) - 1`.
//!
//! General characters go through a discrete-log table and are evaluated in
//! double precision. The Legendre character has an exact integer path which
//! every identity that allows it uses.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FSet, PrimeField};
use crate::funcspace::{CFunction, IntFunction};
use crate::tolerance;

/// The character group of `F_p^*`, realized through discrete logarithms to
/// the least primitive root.
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    field: PrimeField,
    dlog: Vec<u64>,
}

impl CharacterGroup {
    pub fn new(field: PrimeField) -> Self {
        let p = field.p();
        let g = field.primitive_root();
        let mut dlog = vec![0u64; p as usize];
        let mut x = 1u64;
        for k in 0..p - 1 {
            dlog[x as usize] = k;
            x = field.mul(x, g);
        }
        CharacterGroup { field, dlog }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// Number of characters, `p - 1`.
    pub fn order(&self) -> u64 {
        self.field.p() - 1
    }

    /// `log_g x` for `x ≠ 0`.
    pub fn dlog(&self, x: u64) -> Option<u64> {
        let x = x % self.field.p();
        (x != 0).then(|| self.dlog[x as usize])
    }

    /// `χ_j` with `χ_j(g^k) = e(jk / (p - 1))`.
    pub fn character(&self, index: u64) -> Result<MultChar<'_>> {
        if index >= self.order() {
            return Err(Error::InvalidArgument(format!(
                "character index {index} must be below p - 1 = {}",
                self.order()
            )));
        }
        Ok(MultChar { group: self, index })
    }

    pub fn principal(&self) -> MultChar<'_> {
        MultChar { group: self, index: 0 }
    }

    pub fn legendre(&self) -> MultChar<'_> {
        MultChar { group: self, index: self.field.t() }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MultChar<'a> {
    group: &'a CharacterGroup,
    index: u64,
}

impl<'a> MultChar<'a> {
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn field(&self) -> &'a PrimeField {
        &self.group.field
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    pub fn is_legendre(&self) -> bool {
        self.index == self.group.field.t()
    }

    pub fn conj(&self) -> MultChar<'a> {
        let n = self.group.order();
        MultChar { group: self.group, index: (n - self.index) % n }
    }

    /// Character value at any integer; zero at `0` (also for the principal character).
    pub fn eval(&self, x: i64) -> Complex64 {
        let p = self.group.field.p() as i64;
        let x = x.rem_euclid(p) as u64;
        if x == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let n = self.group.order();
        let k = (self.index as u128 * self.group.dlog[x as usize] as u128 % n as u128) as u64;
        // exact values at 1 and -1 keep real characters real
        if k == 0 {
            Complex64::new(1.0, 0.0)
        } else if 2 * k == n {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
        }
    }

    /// Exact value for characters of order at most two.
    pub fn eval_exact(&self, x: i64) -> Option<i64> {
        if self.is_principal() {
            return Some(i64::from(x.rem_euclid(self.group.field.p() as i64) != 0));
        }
        self.is_legendre().then(|| self.group.field.chi(x))
    }

    pub fn values(&self) -> CFunction {
        CFunction::from_fn(self.group.field.modulus(), |x| self.eval(x as i64))
    }

    fn same_field(&self, other: &MultChar<'_>) -> Result<()> {
        let (a, b) = (self.group.field.p(), other.group.field.p());
        if a != b {
            return Err(Error::ModulusMismatch { left: a as usize, right: b as usize });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaussSumKind {
    RealPositive,
    PositiveImaginary,
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussSumValue {
    pub p: u64,
    pub value: Complex64,
    /// Observed shape of the value; `None` if it is neither real-positive nor
    /// positive-imaginary within tolerance.
    pub kind: Option<GaussSumKind>,
}

impl GaussSumValue {
    /// `√p` for `p ≡ 1 (mod 4)`, `i√p` for `p ≡ 3 (mod 4)`.
    pub fn closed_form(p: u64) -> Complex64 {
        let s = (p as f64).sqrt();
        if p % 4 == 1 {
            Complex64::new(s, 0.0)
        } else {
            Complex64::new(0.0, s)
        }
    }

    pub fn expected_kind(p: u64) -> GaussSumKind {
        if p % 4 == 1 {
            GaussSumKind::RealPositive
        } else {
            GaussSumKind::PositiveImaginary
        }
    }

    pub fn matches_closed_form(&self) -> bool {
        let sqrt_p = (self.p as f64).sqrt();
        let p = self.p as f64;
        self.kind == Some(Self::expected_kind(self.p))
            && (self.value - Self::closed_form(self.p)).norm() <= tolerance::GAUSS_REL * sqrt_p
            && (self.value.norm_sqr() - p).abs() <= tolerance::GAUSS_REL * p
    }
}

/// `G(p) = Σ_x χ(x) e(x/p)` by direct summation.
pub fn gauss_sum(field: &PrimeField) -> GaussSumValue {
    let p = field.p();
    let mut value = Complex64::new(0.0, 0.0);
    for x in 1..p {
        let angle = 2.0 * PI * x as f64 / p as f64;
        value += field.chi(x as i64) as f64 * Complex64::from_polar(1.0, angle);
    }
    let tol = tolerance::GAUSS_REL * (p as f64).sqrt();
    let kind = if value.im.abs() <= tol && value.re > 0.0 {
        Some(GaussSumKind::RealPositive)
    } else if value.re.abs() <= tol && value.im > 0.0 {
        Some(GaussSumKind::PositiveImaginary)
    } else {
        None
    };
    GaussSumValue { p, value, kind }
}

/// `J(φ, ψ) = Σ_x φ(x) ψ(1 - x)`.
pub fn jacobi_sum(phi: &MultChar<'_>, psi: &MultChar<'_>) -> Result<Complex64> {
    phi.same_field(psi)?;
    let p = phi.field().p() as i64;
    Ok((0..p).map(|x| phi.eval(x) * psi.eval(1 - x)).sum())
}

/// `J(χ, χ)` for the Legendre symbol, in integers.
pub fn jacobi_sum_legendre(field: &PrimeField) -> i64 {
    let p = field.p() as i64;
    (0..p).map(|x| field.chi(x) * field.chi(1 - x)).sum()
}

/// `(ψ ∘ ψ̄)(x) = Σ_y ψ(y) conj(ψ(y + x))`.
pub fn self_correlation(psi: &MultChar<'_>) -> CFunction {
    let v = psi.values();
    v.convolve_circ(&v.conj()).expect("same modulus")
}

#[derive(Debug, Clone, Serialize)]
pub struct WeilReport {
    pub shifts: Vec<u64>,
    pub value: i64,
    /// Number of shifted factors; the bound is `factors · √p`.
    pub factors: usize,
    pub bound: f64,
    pub pass: bool,
}

/// `Σ_x χ(x) χ(x + x_1) … χ(x + x_k)` against `k√p` for distinct nonzero shifts.
pub fn weil_check(field: &PrimeField, shifts: &[u64]) -> Result<WeilReport> {
    if shifts.is_empty() {
        return Err(Error::InvalidShifts("no shifts given".into()));
    }
    let p = field.p();
    let mut seen = std::collections::BTreeSet::new();
    for &s in shifts {
        if s % p == 0 {
            return Err(Error::InvalidShifts(format!("shift {s} is zero mod {p}")));
        }
        if !seen.insert(s % p) {
            return Err(Error::InvalidShifts(format!("shift {s} repeats mod {p}")));
        }
    }
    let value: i64 = (0..p as i64)
        .map(|x| shifts.iter().fold(field.chi(x), |acc, &s| acc * field.chi(x + s as i64)))
        .sum();
    let bound = shifts.len() as f64 * (p as f64).sqrt();
    Ok(WeilReport { shifts: shifts.to_vec(), value, factors: shifts.len(), bound, pass: (value as f64).abs() <= bound })
}

#[derive(Debug, Clone, Serialize)]
pub struct SigmaReport {
    pub value: Complex64,
    /// `√(|A||B|p)`.
    pub de_bound: f64,
    /// `min` over both orientations of `‖g‖₂ (p‖h‖₂² - |<h>|²)^{1/2}`.
    pub sharp_bound: f64,
    pub de_pass: bool,
    pub sharp_pass: bool,
}

/// `σ(A, B) = Σ_{x,y} χ(x + y) B(x) A(y)` with both upper bounds.
pub fn sigma_sum(a: &FSet, b: &FSet, chi: &MultChar<'_>) -> Result<SigmaReport> {
    let p = chi.field().p();
    for s in [a, b] {
        if s.modulus() as u64 != p {
            return Err(Error::ModulusMismatch { left: s.modulus(), right: p as usize });
        }
    }
    if chi.is_principal() {
        return Err(Error::InvalidArgument("σ bounds need a non-principal character".into()));
    }
    let (na, nb, pf) = (a.len() as f64, b.len() as f64, p as f64);
    let de_bound = (na * nb * pf).sqrt();
    let sharp_bound = (nb * (pf * na - na * na)).sqrt().min((na * (pf * nb - nb * nb)).sqrt());

    if chi.is_legendre() {
        let field = chi.field();
        let v: i64 = b
            .iter()
            .flat_map(|x| a.iter().map(move |y| (x + y) as i64))
            .map(|s| field.chi(s))
            .sum();
        // compare squares exactly
        let (na, nb, p) = (a.len() as i128, b.len() as i128, p as i128);
        let v2 = (v as i128) * (v as i128);
        return Ok(SigmaReport {
            value: Complex64::new(v as f64, 0.0),
            de_bound,
            sharp_bound,
            de_pass: v2 <= na * nb * p,
            sharp_pass: v2 <= nb * (p * na - na * na) && v2 <= na * (p * nb - nb * nb),
        });
    }

    let value: Complex64 =
        b.iter().flat_map(|x| a.iter().map(move |y| (x + y) as i64)).map(|s| chi.eval(s)).sum();
    let slack = tolerance::CHAR_ABS * (1.0 + de_bound);
    let n = value.norm();
    Ok(SigmaReport { value, de_bound, sharp_bound, de_pass: n <= de_bound + slack, sharp_pass: n <= sharp_bound + slack })
}

/// Exact check of `|Σ_{x,y} g(x) h(y) χ(x+y)|² ≤ ‖g‖₂² (p‖h‖₂² - <h>²) ≤ p‖g‖₂²‖h‖₂²`.
pub fn rho_inequality(field: &PrimeField, g: &IntFunction, h: &IntFunction) -> Result<bool> {
    let hc = h.convolve_circ(&field.chi_function())?;
    // Σ_x g(x) Σ_y h(y) χ(y + x)
    let s = g.inner(&hc)? as i128;
    let p = field.p() as i128;
    let (gn, hn, hs) = (g.norm_sq() as i128, h.norm_sq() as i128, h.sum() as i128);
    let sharp = gn * (p * hn - hs * hs);
    Ok(s * s <= sharp && sharp <= p * gn * hn)
}

#[derive(Debug, Clone, Serialize)]
pub struct RhoReport {
    pub lhs: IntFunction,
    pub rhs: IntFunction,
    pub pass: bool,
}

/// `((g ∘ χ) ∘ (h ∘ χ))(x) = p(h ∘ g)(x) - <g><h>`, pointwise in integers.
pub fn rho_conv_identity(field: &PrimeField, g: &IntFunction, h: &IntFunction) -> Result<RhoReport> {
    let chi = field.chi_function();
    let gc = g.convolve_circ(&chi)?;
    let hc = h.convolve_circ(&chi)?;
    let lhs = gc.convolve_circ(&hc)?;
    let p = field.p() as i64;
    let rhs = h.convolve_circ(g)?.scale(p).add_constant(-g.sum() * h.sum());
    let pass = lhs == rhs;
    Ok(RhoReport { lhs, rhs, pass })
}

/// Scalar form: `Σ_x (g ∘ χ)(x) (h ∘ χ)(x) = p<g, h> - <g><h>`. Returns both sides.
pub fn rho_scalar_identity(field: &PrimeField, g: &IntFunction, h: &IntFunction) -> Result<(i64, i64)> {
    let chi = field.chi_function();
    let lhs = g.convolve_circ(&chi)?.inner(&h.convolve_circ(&chi)?)?;
    let rhs = field.p() as i64 * g.inner(h)? - g.sum() * h.sum();
    Ok((lhs, rhs))
}

/// `p‖f‖₂² = <f>² + Σ_x (f ∘ χ)(x)²`, both sides as integers.
pub fn cauchy_schwarz_decomposition(field: &PrimeField, f: &IntFunction) -> Result<(i64, i64)> {
    let fc = f.convolve_circ(&field.chi_function())?;
    let lhs = field.p() as i64 * f.norm_sq();
    let s = f.sum();
    Ok((lhs, s * s + fc.norm_sq()))
}

/// `(R ∘ R)(x) = (p - 3)/4 - χ(x)(1 + χ(-1))/4` for `x ≠ 0`.
pub fn r_circ_r(field: &PrimeField, x: u64) -> Result<i64> {
    let p = field.p() as i64;
    if x.is_multiple_of(field.p()) {
        return Err(Error::InvalidArgument("closed form holds only for x ≠ 0".into()));
    }
    let num = p - 3 - field.chi(x as i64) * (1 + field.chi(-1));
    debug_assert_eq!(num % 4, 0);
    Ok(num / 4)
}

/// `max_{x≠0} |R̂(x)|` next to the bound `(√p + 1)/2`.
pub fn residue_fourier_peak(field: &PrimeField) -> (f64, f64) {
    let rhat = crate::funcspace::fourier(&field.residue_set().indicator().to_complex());
    let peak = rhat.values()[1..].iter().map(|v| v.norm()).fold(0.0, f64::max);
    (peak, ((field.p() as f64).sqrt() + 1.0) / 2.0)
}
