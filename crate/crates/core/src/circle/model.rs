use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{CMatrix, C64};
use crate::thom_smale::{make_circle_morse_matrix, CriticalForms, MorseSystem};

/// How the multivalued part of the log-density is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Reference {
    /// `φ₀(θ) = −ℓθ/L`.
    Linear,
    /// `φ₀(θ) = −ℓ G(θ)/L` with `G` constant on windows of relative width
    /// `window` around each critical point of the potential and advancing by
    /// one arc length across every arc.
    Flattened { window: f64 },
}

/// Periodic part `ψ` of the log-density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Perturbation {
    Zero,
    /// `amp · sin(2π freq θ / L)`.
    Sin {
        amp: f64,
        freq: u32,
    },
    /// `amp · cos(2π freq θ / L)`.
    Cos {
        amp: f64,
        freq: u32,
    },
    /// `jump · θ / L`: not periodic, so it changes the class of the form and
    /// is rejected by validation.
    Ramp {
        jump: f64,
    },
}

/// Morse potential `f(θ) = cos(2π wells θ / L)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    pub wells: u32,
}

/// A flat line bundle (or a diagonal sum of them) on the circle of length
/// `L`, with a symmetric bilinear form `e^{2φ}`.
///
/// Sections are functions on `[0, L)` with `u(θ + L) = λ u(θ)`. The form is
/// written in that chart as `e^{2φ(θ)}` with `φ = φ₀ + ψ − T f`, where `φ₀`
/// jumps by `−log λ` across the chart boundary so that the pairing of two
/// sections is single valued. Witten deformation adds to `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleModel {
    length: f64,
    holonomies: Vec<C64>,
    reference: Reference,
    perturbation: Perturbation,
    potential: Option<Potential>,
    t: f64,
}

/// One rank-one summand of a [`CircleModel`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct Line<'a> {
    pub model: &'a CircleModel,
    pub lambda: C64,
    pub ell: C64,
}

impl CircleModel {
    pub fn new(length: f64, lambda: C64) -> Result<Self> {
        Self::with_holonomies(length, vec![lambda])
    }

    /// Diagonal holonomy `diag(holonomies)`.
    pub fn with_holonomies(length: f64, holonomies: Vec<C64>) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Model(format!("circumference {length} must be positive")));
        }
        if holonomies.is_empty() {
            return Err(Error::Model("at least one holonomy is required".into()));
        }
        if holonomies.iter().any(|l| l.norm() == 0.0 || !l.re.is_finite() || !l.im.is_finite()) {
            return Err(Error::Model("holonomy must be a finite nonzero number".into()));
        }
        Ok(CircleModel {
            length,
            holonomies,
            reference: Reference::Linear,
            perturbation: Perturbation::Zero,
            potential: None,
            t: 0.0,
        })
    }

    pub fn with_reference(mut self, r: Reference) -> Result<Self> {
        self.reference = r;
        self.validate()?;
        Ok(self)
    }

    pub fn with_perturbation(mut self, p: Perturbation) -> Result<Self> {
        self.perturbation = p;
        self.validate()?;
        Ok(self)
    }

    pub fn with_potential(mut self, wells: u32) -> Result<Self> {
        self.potential = Some(Potential { wells });
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if let Perturbation::Ramp { jump } = self.perturbation {
            if jump != 0.0 {
                return Err(Error::Model(format!("log-density ramp of {jump} changes the homotopy class of the form")));
            }
        }
        if let Some(p) = self.potential {
            if p.wells == 0 {
                return Err(Error::Model("potential needs at least one well".into()));
            }
        }
        if let Reference::Flattened { window } = self.reference {
            if self.potential.is_none() {
                return Err(Error::Model("flattened reference needs a potential".into()));
            }
            if !(window > 0.0 && window < 0.5) {
                return Err(Error::Model(format!("flattening window {window} outside (0, 0.5)")));
            }
        }
        // The undeformed form must stay away from zero.
        for k in 0..self.rank() {
            let line = self.line(k);
            for j in 0..256 {
                let th = self.length * j as f64 / 256.0;
                if (2.0 * line.phi_base(th).re) < (1e-10f64).ln() {
                    return Err(Error::Model("bilinear form is numerically degenerate".into()));
                }
            }
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn rank(&self) -> usize {
        self.holonomies.len()
    }

    pub fn holonomies(&self) -> &[C64] {
        &self.holonomies
    }

    pub fn lambda(&self) -> C64 {
        self.holonomies[0]
    }

    pub fn reference(&self) -> Reference {
        self.reference
    }

    pub fn perturbation(&self) -> Perturbation {
        self.perturbation
    }

    pub fn potential(&self) -> Option<Potential> {
        self.potential
    }

    /// Accumulated Witten deformation parameter.
    pub fn t(&self) -> f64 {
        self.t
    }

    /// Canonical: linear reference, no perturbation, no deformation.
    pub fn is_canonical(&self) -> bool {
        self.reference == Reference::Linear && self.perturbation == Perturbation::Zero && self.t == 0.0
    }

    /// The same bundle with the canonical form.
    pub fn canonical(&self) -> CircleModel {
        CircleModel { reference: Reference::Linear, perturbation: Perturbation::Zero, t: 0.0, ..self.clone() }
    }

    pub fn undeformed(&self) -> CircleModel {
        CircleModel { t: 0.0, ..self.clone() }
    }

    pub fn is_acyclic(&self) -> bool {
        self.holonomies.iter().all(|&l| (l - C64::new(1.0, 0.0)).norm() > 0.0)
    }

    pub(crate) fn line(&self, k: usize) -> Line<'_> {
        let lambda = self.holonomies[k];
        Line { model: self, lambda, ell: lambda.ln() }
    }

    /// Rank-one summands.
    pub(crate) fn lines(&self) -> impl Iterator<Item = Line<'_>> {
        (0..self.rank()).map(move |k| self.line(k))
    }

    /// The model for a single summand.
    pub fn component(&self, k: usize) -> CircleModel {
        CircleModel { holonomies: vec![self.holonomies[k]], ..self.clone() }
    }

    fn omega(&self) -> f64 {
        let k = self.potential.map(|p| p.wells).unwrap_or(0) as f64;
        2.0 * PI * k / self.length
    }

    pub fn f(&self, th: f64) -> f64 {
        if self.potential.is_none() {
            return 0.0;
        }
        (self.omega() * th).cos()
    }

    pub fn df(&self, th: f64) -> f64 {
        if self.potential.is_none() {
            return 0.0;
        }
        -self.omega() * (self.omega() * th).sin()
    }

    pub fn ddf(&self, th: f64) -> f64 {
        if self.potential.is_none() {
            return 0.0;
        }
        -self.omega().powi(2) * (self.omega() * th).cos()
    }

    /// Critical points of the potential in `[0, L)`: `θ_m = mL/(2k)`, maxima for even `m`.
    pub fn critical_points(&self) -> Vec<(f64, usize)> {
        let Some(p) = self.potential else { return vec![] };
        let k = p.wells as usize;
        (0..2 * k).map(|m| (m as f64 * self.length / (2 * k) as f64, if m % 2 == 0 { 1 } else { 0 })).collect()
    }

    /// `ψ`, `ψ'`, `ψ''`.
    pub(crate) fn psi(&self, th: f64) -> (f64, f64, f64) {
        match self.perturbation {
            Perturbation::Zero => (0.0, 0.0, 0.0),
            Perturbation::Sin { amp, freq } => {
                let w = 2.0 * PI * freq as f64 / self.length;
                (amp * (w * th).sin(), amp * w * (w * th).cos(), -amp * w * w * (w * th).sin())
            }
            Perturbation::Cos { amp, freq } => {
                let w = 2.0 * PI * freq as f64 / self.length;
                (amp * (w * th).cos(), -amp * w * (w * th).sin(), -amp * w * w * (w * th).cos())
            }
            Perturbation::Ramp { jump } => (jump * th / self.length, jump / self.length, 0.0),
        }
    }

    /// `G`, `G'`, `G''` for the reference; `G(θ) = θ` when linear.
    pub(crate) fn staircase(&self, th: f64) -> (f64, f64, f64) {
        match self.reference {
            Reference::Linear => (th, 1.0, 0.0),
            Reference::Flattened { window } => {
                let k = self.potential.map(|p| p.wells).unwrap_or(1) as f64;
                let a = self.length / (2.0 * k);
                let m = (th / a).floor();
                let s = th / a - m;
                let span = 1.0 - 2.0 * window;
                let x = ((s - window) / span).clamp(0.0, 1.0);
                let (sv, sd, sdd) = smootherstep(x);
                let inside = s > window && s < 1.0 - window;
                let d1 = if inside { sd / span } else { 0.0 };
                let d2 = if inside { sdd / (span * span * a) } else { 0.0 };
                (a * (m + sv), d1, d2)
            }
        }
    }

    /// Morse system of the potential, in the layout of
    /// [`make_circle_morse`](crate::thom_smale::make_circle_morse): point `c_j`
    /// sits at `θ_{j+1}`, and the seam is the edge through the chart boundary.
    pub fn morse_system(&self) -> Result<MorseSystem> {
        let k = self.potential.ok_or_else(|| Error::Model("no Morse potential".into()))?.wells as usize;
        let hol = CMatrix::diag(&self.holonomies);
        make_circle_morse_matrix(k, &hol, 2 * k - 2)
    }

    /// Position of point `c_j` of [`Self::morse_system`].
    pub fn morse_point_position(&self, j: usize) -> f64 {
        let cps = self.critical_points();
        cps[(j + 1) % cps.len()].0
    }

    /// `b_x = e^{2φ(x)}` at the critical points, for the undeformed form.
    pub fn critical_forms(&self) -> Result<CriticalForms> {
        let ms = self.morse_system()?;
        let forms = (0..ms.points().len())
            .map(|j| {
                let th = self.morse_point_position(j);
                CMatrix::diag(&self.lines().map(|l| (2.0 * l.phi_base(th)).exp()).collect::<Vec<_>>())
            })
            .collect();
        CriticalForms::new(forms)
    }
}

fn smootherstep(x: f64) -> (f64, f64, f64) {
    (
        x * x * x * (x * (6.0 * x - 15.0) + 10.0),
        30.0 * x * x * (x - 1.0) * (x - 1.0),
        60.0 * x * (2.0 * x * x - 3.0 * x + 1.0),
    )
}

impl Line<'_> {
    /// `φ₀ + ψ` (no deformation).
    pub fn phi_base(&self, th: f64) -> C64 {
        let (g, _, _) = self.model.staircase(th);
        let (p, _, _) = self.model.psi(th);
        -self.ell * (g / self.model.length) + p
    }

    /// `φ`, `φ'`, `φ''` including the deformation.
    pub fn phi(&self, th: f64) -> (C64, C64, C64) {
        let m = self.model;
        let (g, g1, g2) = m.staircase(th);
        let (p, p1, p2) = m.psi(th);
        let s = -self.ell / m.length;
        (s * g + p - m.t * m.f(th), s * g1 + p1 - m.t * m.df(th), s * g2 + p2 - m.t * m.ddf(th))
    }
}

/// Witten deformation `b ↦ e^{−2Tf} b`, i.e. `φ ↦ φ − T f`.
pub fn witten_deform(model: &CircleModel, t: f64) -> Result<CircleModel> {
    if model.potential.is_none() {
        return Err(Error::Model("Witten deformation needs a Morse potential".into()));
    }
    Ok(CircleModel { t: model.t + t, ..model.clone() })
}

/// The Kamber-Tondeur form `θ = 2φ' dθ` of the total log-density.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaForm {
    /// Sample points in `[0, L)`.
    pub nodes: Vec<f64>,
    /// Coefficient of `dθ` at each node, traced over the summands.
    pub values: Vec<C64>,
    /// `∮ θ`.
    pub period: C64,
    /// `∫ θ` over arcs where the potential increases minus the same over
    /// arcs where it decreases. Zero when there is no potential.
    pub imbalance: C64,
}

pub fn theta_form(model: &CircleModel, samples: usize) -> ThetaForm {
    let l = model.length;
    let nodes: Vec<f64> = (0..samples).map(|j| l * j as f64 / samples as f64).collect();
    let values = nodes.iter().map(|&th| model.lines().map(|line| 2.0 * line.phi(th).1).sum()).collect();
    // Exact integrals from values of φ, evaluated on the closed chart [0, L].
    let mut period = C64::new(0.0, 0.0);
    let mut imbalance = C64::new(0.0, 0.0);
    for line in model.lines() {
        period += 2.0 * (line.phi(l).0 - line.phi(0.0).0);
        let mut cps: Vec<(f64, usize)> = model.critical_points();
        if !cps.is_empty() {
            cps.push((l, 1));
            for w in cps.windows(2) {
                let delta = 2.0 * (line.phi(w[1].0).0 - line.phi(w[0].0).0);
                // Arcs leaving a maximum are descending.
                if w[0].1 == 1 {
                    imbalance -= delta;
                } else {
                    imbalance += delta;
                }
            }
        }
    }
    ThetaForm { nodes, values, period, imbalance }
}
