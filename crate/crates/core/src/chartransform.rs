//! The χ-transform built from the orthonormal system
//! `f_s(x) = f(x + s)`, `f(x) = (χ(x) - 1/√p)/√p`.
//!
//! `φ̃(x) = Σ_y φ(y) conj f_x(y) = (φ ∘ f̄)(x)` and `φ = Σ_y φ̃(y) f_y`.
//! Everything is written for complex `φ` with the conjugations kept
//! explicit, even though `f` is real for the Legendre symbol.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::diffsets::pds_lambda;
use crate::error::{Error, Result};
use crate::field::{FSet, PrimeField};
use crate::funcspace::{CFunction, IntFunction, ValueHistogram};
use crate::tolerance::{SUPPORT_REL, TILDE_REL};

#[derive(Debug, Clone)]
pub struct ChiSystem {
    field: PrimeField,
    base: CFunction,
}

impl ChiSystem {
    pub fn new(field: PrimeField) -> Self {
        let rp = (field.p() as f64).sqrt();
        let chi = field.chi_function();
        let base = CFunction::from_fn(field.modulus(), |x| Complex64::new((chi.values()[x] as f64 - 1.0 / rp) / rp, 0.0));
        ChiSystem { field, base }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    /// `f`.
    pub fn base(&self) -> &CFunction {
        &self.base
    }

    /// `f_s(x) = f(x + s)`.
    pub fn f_s(&self, s: i64) -> CFunction {
        self.base.shift(s)
    }

    /// `f^λ_s(x) = f(λx + s)`.
    pub fn f_lambda_s(&self, lambda: i64, s: i64) -> CFunction {
        let m = self.field.modulus() as i64;
        CFunction::from_fn(self.field.modulus(), |x| self.base.at((lambda.rem_euclid(m) * x as i64 + s).rem_euclid(m)))
    }

    /// `(1 + 1/√p)/√p`, the uniform bound on `|f|`.
    pub fn uniform_bound(&self) -> f64 {
        let rp = (self.p() as f64).sqrt();
        (1.0 + 1.0 / rp) / rp
    }

    fn check(&self, phi: &CFunction) -> Result<()> {
        if phi.modulus() != self.field.modulus() {
            return Err(Error::ModulusMismatch { left: phi.modulus(), right: self.field.modulus() });
        }
        Ok(())
    }

    /// `φ̃ = φ ∘ f̄`.
    pub fn tilde(&self, phi: &CFunction) -> Result<CFunction> {
        self.check(phi)?;
        phi.convolve_circ(&self.base.conj())
    }

    pub fn tilde_int(&self, phi: &IntFunction) -> Result<CFunction> {
        self.tilde(&phi.to_complex())
    }

    /// `φ(x) = Σ_y φ̃(y) f_y(x) = (φ̃ ∘ f)(x)`.
    pub fn inverse_tilde(&self, phi_tilde: &CFunction) -> Result<CFunction> {
        self.check(phi_tilde)?;
        phi_tilde.convolve_circ(&self.base)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TildeSuiteReport {
    pub p: u64,
    pub lambda: i64,
    pub mu: i64,
    pub s: i64,
    pub checks: Vec<IdentityCheck>,
}

impl TildeSuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Checks every identity of the transform pointwise for one choice of
/// `φ, ψ, λ, μ, s`. `λ` and `μ` must be nonzero mod `p`.
pub fn tilde_identity_suite(
    sys: &ChiSystem,
    phi: &CFunction,
    psi: &CFunction,
    lambda: i64,
    mu: i64,
    s: i64,
) -> Result<TildeSuiteReport> {
    let field = sys.field();
    let p = field.p();
    let pf = p as f64;
    for (name, v) in [("lambda", lambda), ("mu", mu)] {
        if field.chi(v) == 0 {
            return Err(Error::InvalidArgument(format!("{name} must be nonzero mod {p}")));
        }
    }
    let scale = phi.sup_norm().max(1.0) * psi.sup_norm().max(1.0);
    let tol = TILDE_REL * pf * scale;

    let pt = sys.tilde(phi)?;
    let qt = sys.tilde(psi)?;
    let chi_l = field.chi(lambda) as f64;
    let chi_m = field.chi(mu) as f64;
    let chi_neg = field.chi(-1) as f64;
    let phi_mean = phi.sum();
    let psi_bar_mean = psi.conj().sum();

    let mut checks = Vec::new();
    let mut push = |name: &'static str, lhs: CFunction, rhs: CFunction| {
        let err = lhs.max_distance(&rhs);
        checks.push(IdentityCheck { name, max_error: err, tolerance: tol, pass: err <= tol });
    };

    // (φ_s)~ = (φ̃)_{-s}
    push("tilde_0", sys.tilde(&phi.shift(s))?, pt.shift(-s));
    // (conj φ̃)~ = conj φ, and (φ̃)~ = φ for real χ
    push("tilde_1", sys.tilde(&pt.conj())?, phi.conj());
    push("tilde_1_real", sys.tilde(&pt)?, phi.clone());
    // (φ^λ)~(x) = χ(λ)φ̃(λx) + <φ>(χ(λ) - 1)/p
    push(
        "tilde_1.5",
        sys.tilde(&phi.scale_argument(lambda))?,
        pt.scale_argument(lambda).scale(Complex64::from(chi_l)).add_constant(phi_mean * (chi_l - 1.0) / pf),
    );
    // φ = Σ_y φ̃(y) f_y
    push("tilde_2", sys.inverse_tilde(&pt)?, phi.clone());
    // Σ φ conj ψ = Σ φ̃ conj ψ̃
    push(
        "tilde_3",
        CFunction::constant(1, phi.inner(psi)?),
        CFunction::constant(1, pt.inner(&qt)?),
    );
    // (φ ∘ ψ)~ = φ * ψ̃
    push("tilde_5", sys.tilde(&phi.convolve_circ(psi)?)?, phi.convolve_star(&qt)?);
    // (φ^λ ∘ conj ψ^μ) = χ(λ)χ(μ)(conj ψ̃^μ ∘ φ̃^λ) + (1 - χ(λ)χ(μ))/p <φ><ψ̄>
    let cc = chi_l * chi_m;
    push(
        "tilde_4*",
        phi.scale_argument(lambda).convolve_circ(&psi.scale_argument(mu).conj())?,
        qt.scale_argument(mu)
            .conj()
            .convolve_circ(&pt.scale_argument(lambda))?
            .scale(Complex64::from(cc))
            .add_constant(phi_mean * psi_bar_mean * (1.0 - cc) / pf),
    );
    // (φ ∘ ψ̄)(x) = (φ̃ ∘ conj ψ̃)(-x) = (conj ψ̃ ∘ φ̃)(x)
    let lhs4 = phi.convolve_circ(&psi.conj())?;
    push("tilde_4", lhs4.clone(), pt.convolve_circ(&qt.conj())?.reflect());
    push("tilde_4_swap", lhs4, qt.conj().convolve_circ(&pt)?);
    // (φ * ψ̄)(x) = χ(-1)(φ̃ * conj ψ̃)(-x) + (1 - χ(-1))/p <φ><ψ̄>
    push(
        "tilde_4'",
        phi.convolve_star(&psi.conj())?,
        pt.convolve_star(&qt.conj())?
            .reflect()
            .scale(Complex64::from(chi_neg))
            .add_constant(phi_mean * psi_bar_mean * (1.0 - chi_neg) / pf),
    );

    Ok(TildeSuiteReport { p, lambda, mu, s, checks })
}

/// `E_A = A ∘ χ`, kept exact, together with its checked properties.
#[derive(Debug, Clone, Serialize)]
pub struct EFunction {
    pub p: u64,
    pub set: FSet,
    pub values: IntFunction,
    /// Histogram of `E_A(x) mod p`.
    pub level_histogram: ValueHistogram,
    pub mean: i64,
    pub norm_sq: i64,
    pub mean_zero: bool,
    /// `‖E_A‖₂² = p|A| - |A|²`.
    pub norm_identity: bool,
    /// `E_A(xy) = χ(x) E_{x⁻¹A}(y)` for the sampled `x`.
    pub cocycle: bool,
    pub cocycle_samples: usize,
    /// Every level set modulo `p` has at most `(p - 1)/2` points; only
    /// meaningful for `0 < |A| < p`.
    pub level_bound: Option<bool>,
    /// `(A * E_A) = (|A| - 1)χ` when `A` is a `λ = 1` difference set.
    pub singer_representation: Option<bool>,
    /// `Σ_{x,y} χ(x + y) A(x) E_A(y) = p|A| - |A|²`.
    pub l_opt: bool,
}

impl EFunction {
    pub fn holds(&self) -> bool {
        self.mean_zero
            && self.norm_identity
            && self.cocycle
            && self.level_bound.unwrap_or(true)
            && self.singer_representation.unwrap_or(true)
            && self.l_opt
    }
}

const COCYCLE_FULL_LIMIT: u64 = 211;
const COCYCLE_SAMPLES: u64 = 32;

fn e_values(field: &PrimeField, a: &FSet) -> IntFunction {
    a.indicator().convolve_circ(&field.chi_function()).expect("same modulus")
}

pub fn e_function(sys: &ChiSystem, a: &FSet) -> Result<EFunction> {
    let field = sys.field();
    if a.modulus() != field.modulus() {
        return Err(Error::ModulusMismatch { left: a.modulus(), right: field.modulus() });
    }
    let p = field.p();
    let pi = p as i64;
    let size = a.len() as i64;
    let values = e_values(field, a);
    let mean = values.sum();
    let norm_sq = values.norm_sq();

    let mut levels = BTreeMap::new();
    for &v in values.values() {
        *levels.entry(v.rem_euclid(pi)).or_insert(0u64) += 1;
    }
    let level_histogram = ValueHistogram { entries: levels };
    let level_bound = (size > 0 && size < pi).then(|| level_histogram.entries.values().all(|&c| c <= field.t()));

    let samples: Vec<u64> = if p <= COCYCLE_FULL_LIMIT {
        (1..p).collect()
    } else {
        let g = field.primitive_root();
        (0..COCYCLE_SAMPLES).map(|k| field.pow(g, k * (p - 1) / COCYCLE_SAMPLES)).collect()
    };
    let cocycle = samples.iter().all(|&x| {
        let xinv = field.inv(x).expect("x nonzero") as i64;
        let ex = e_values(field, &a.dilate(xinv).expect("unit"));
        let cx = field.chi(x as i64);
        (0..pi).all(|y| values.at(x as i64 * y) == cx * ex.at(y))
    });

    let singer_representation = (pds_lambda(a).lambda == Some(1)).then(|| {
        let lhs = a.indicator().convolve_star(&values).expect("same modulus");
        lhs == field.chi_function().scale(size - 1)
    });

    let l_opt_lhs: i64 = a
        .iter()
        .map(|x| (0..pi).map(|y| field.chi(x as i64 + y) * values.at(y)).sum::<i64>())
        .sum();

    Ok(EFunction {
        p,
        set: a.clone(),
        mean_zero: mean == 0,
        norm_identity: norm_sq == pi * size - size * size,
        cocycle,
        cocycle_samples: samples.len(),
        level_bound,
        singer_representation,
        l_opt: l_opt_lhs == pi * size - size * size,
        level_histogram,
        values,
        mean,
        norm_sq,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct UncertaintyReport {
    pub supp_g: usize,
    pub supp_g_tilde: usize,
    pub product: usize,
    /// `p(1 + 1/√p)^{-2}`.
    pub bound: f64,
    pub pass: bool,
}

/// `|supp g|·|supp g̃| ≥ p(1 + 1/√p)^{-2}`, supports taken relative to the
/// sup norm of each function.
pub fn uncertainty_product(sys: &ChiSystem, g: &CFunction) -> Result<UncertaintyReport> {
    uncertainty_product_with_threshold(sys, g, SUPPORT_REL)
}

pub fn uncertainty_product_with_threshold(sys: &ChiSystem, g: &CFunction, rel: f64) -> Result<UncertaintyReport> {
    sys.check(g)?;
    if g.sup_norm() == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let gt = sys.tilde(g)?;
    let supp_g = g.support_size(rel * g.sup_norm());
    let supp_g_tilde = gt.support_size(rel * gt.sup_norm());
    let pf = sys.p() as f64;
    let bound = pf / (1.0 + 1.0 / pf.sqrt()).powi(2);
    let product = supp_g * supp_g_tilde;
    Ok(UncertaintyReport { supp_g, supp_g_tilde, product, bound, pass: product as f64 >= bound })
}
