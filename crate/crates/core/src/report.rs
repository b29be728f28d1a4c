//! Places where a published claim and a direct computation disagree.

use serde::Serialize;

use crate::oracle::{dispersion, Quadrature};
use crate::scaling::{derive_length, PhysicalScale, ELECTRON_MASS, REFERENCE_MASS};
use crate::triple::{self, TripleParams};

/// A stated value next to the computed one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub topic: String,
    pub stated: String,
    pub computed: String,
}

impl Discrepancy {
    pub fn new(topic: impl Into<String>, stated: impl Into<String>, computed: impl Into<String>) -> Self {
        Self {
            topic: topic.into(),
            stated: stated.into(),
            computed: computed.into(),
        }
    }
}

impl std::fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: stated {}; computed {}", self.topic, self.stated, self.computed)
    }
}

pub fn gap_threshold() -> Discrepancy {
    Discrepancy::new(
        "triple-well gap bound threshold",
        "E2 - E0 < 1e-6 for a >= 4",
        format!(
            "sup_lambda f_4 = {:.4e}; sup_lambda f_a <= 1e-6 only from a = {:.3}",
            triple::gap_bound_sup(4.0),
            triple::gap_threshold(1e-6)
        ),
    )
}

pub fn gap_monotonicity() -> Discrepancy {
    let peak = |a: f64| triple::gap_bound_argmax(a);
    Discrepancy::new(
        "monotonicity of f_a in lambda",
        "f_a increasing in lambda on (0, 1) for every a",
        format!(
            "f_a peaks at lambda* = 1/(1 + a csch a): {:.4} at a = 4, {:.4} at a = 7, {:.6} at a = 10",
            peak(4.0),
            peak(7.0),
            peak(10.0)
        ),
    )
}

pub fn seed_dispersion(quad: &Quadrature) -> Discrepancy {
    let d = dispersion(|x| 0.5 * crate::special::sech(x).powi(2), -40.0, 40.0, quad)
        .unwrap_or(f64::NAN);
    Discrepancy::new(
        "dispersion of the sech seed density",
        "D_x = 2.34",
        format!("D_x = {d:.6} (pi/sqrt(12))"),
    )
}

pub fn frequency_estimate() -> Discrepancy {
    let l = derive_length(5e-8, 2.34).expect("positive constants");
    let s = PhysicalScale::new(REFERENCE_MASS, l).expect("positive constants");
    Discrepancy::new(
        "tunnelling frequency estimate",
        "Omega <~ 2e-1 (units as printed) from unit ~6e7 s^-1 and gap 1e-6",
        format!(
            "unit {:.4e} s^-1, Omega = unit x 1e-6 = {:.4e} s^-1",
            s.frequency_unit(),
            s.frequency_to_si(1e-6)
        ),
    )
}

pub fn mass_label() -> Discrepancy {
    Discrepancy::new(
        "mass used for the physical scale",
        "electron rest mass m = 1.7e-27 kg",
        format!("electron rest mass is {ELECTRON_MASS:e} kg; {REFERENCE_MASS:e} kg is proton-scale"),
    )
}

pub fn overlap_term_coefficients() -> Discrepancy {
    let p = TripleParams::new(2.0 / 3.0, 4.0).expect("valid");
    let x = 1.0;
    let exact = triple::rho3(&p, x) - triple::localized_density3(&p, x);
    Discrepancy::new(
        "triple-well overlap term coefficients",
        "(1-lambda)lambda sech x (sech(x+a)+sech(x-a))/4 + (lambda^2/8) sech(x+a)sech(x-a), times alpha^2",
        format!(
            "rho - localized part requires /2 and lambda^2/4 (twice the stated value; at lambda=2/3, a=4, x=1: {exact:.6e} vs stated {:.6e})",
            0.5 * exact
        ),
    )
}

pub fn classical_prefactor() -> Discrepancy {
    Discrepancy::new(
        "classical-limit density prefactor",
        "((1-lambda)^2 + lambda^2/2)^(-1/2)",
        "unit mass needs exponent -1 (the limit of alpha^2)",
    )
}

pub fn even_expansion_weight() -> Discrepancy {
    Discrepancy::new(
        "even-trial expansion, (+,-) cross term",
        "weight 4 beta_+^2",
        "the double sum over k != n yields 2 beta_+^2; with the (+,-) cross term negative the 4 beta_+^2 form falls below Rayleigh(Phi2)",
    )
}

pub fn even_closed_form() -> Discrepancy {
    let p = TripleParams::new(2.0 / 3.0, 5.0).expect("valid");
    let l = p.lambda();
    let d = (1.0 - l).powi(2) + 0.5 * l * l + 0.5 * l * l * triple::overlap_pm(5.0)
        - 2.0 * l * (1.0 - l) * triple::overlap_0p(5.0);
    Discrepancy::new(
        "closed-form bound on E2 - E0",
        "E2 <= E0 + f_a(lambda) follows from the overlap-bounded expansion",
        format!(
            "the substitution drops the positive term 8 lambda (1-lambda) a csch a / D ({:.4e} at lambda=2/3, a=5, where f_a = {:.4e})",
            8.0 * l * (1.0 - l) * triple::overlap_0p(5.0) / d,
            triple::gap_bound_f(&p).expect("in band")
        ),
    )
}

/// Every known disagreement, in a fixed order.
pub fn all(quad: &Quadrature) -> Vec<Discrepancy> {
    vec![
        gap_threshold(),
        gap_monotonicity(),
        even_closed_form(),
        even_expansion_weight(),
        overlap_term_coefficients(),
        classical_prefactor(),
        seed_dispersion(quad),
        frequency_estimate(),
        mass_label(),
    ]
}
