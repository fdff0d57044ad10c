//! Orientation-preserving circle homeomorphisms.
//!
//! Maps are handled through their lifts `η̃: ℝ → ℝ` with `η̃(x + 2π) = η̃(x) + 2π`.
//! The primitive every representation implements is the periodic displacement
//! `d(x) = η̃(x) − x`; working with `d` instead of `η̃` keeps differences of lift
//! values free of cancellation (the identity and rotations give exactly constant
//! displacements).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::{Error, Result};

/// Default node count of a [`SampledLift`].
pub const DEFAULT_LIFT_NODES: usize = 4096;

/// Default number of RK4 substeps per unit flow time.
pub const DEFAULT_STEPS_PER_UNIT_TIME: f64 = 64.0;

/// Tolerance on `|a|² − |b|² = 1` for Möbius parameters.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// A real trigonometric polynomial `v(x) = Σ_{|n|≤B} v_n e^{inx}`, stored by its
/// non-negative modes `v_0, …, v_B` (`v_0` real, `v_{-n} = conj(v_n)`).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    coeffs: Vec<Complex64>,
}

impl VectorField {
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::Invalid(
                "vector field has non-finite coefficients".into(),
            ));
        }
        if coeffs[0].im.abs() > 1e-12 * coeffs[0].re.abs().max(1.0) {
            return Err(Error::Invalid(
                "zero mode of a real vector field must be real".into(),
            ));
        }
        coeffs[0].im = 0.0;
        Ok(Self { coeffs })
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            coeffs: vec![Complex64::new(c, 0.0)],
        }
    }

    /// `amp · cos(nx)`.
    pub fn cos_mode(n: usize, amp: f64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        if n == 0 {
            coeffs[0] = Complex64::new(amp, 0.0);
        } else {
            coeffs[n] = Complex64::new(amp / 2.0, 0.0);
        }
        Self { coeffs }
    }

    /// `amp · sin(nx)`, `n ≥ 1`.
    pub fn sin_mode(n: usize, amp: f64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(0.0, -amp / 2.0);
        Self { coeffs }
    }

    pub fn band(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Non-negative modes `v_0, …, v_B`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `v_n` for any integer `n`.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let k = n.unsigned_abs() as usize;
        match self.coeffs.get(k) {
            None => Complex64::new(0.0, 0.0),
            Some(&c) if n < 0 => c.conj(),
            Some(&c) => c,
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let step = Complex64::from_polar(1.0, x);
        let mut z = step;
        let mut acc = 0.0;
        for c in &self.coeffs[1..] {
            acc += (c * z).re;
            z *= step;
        }
        self.coeffs[0].re + 2.0 * acc
    }

    /// Upper bound `|v_0| + 2Σ|v_n|` on the sup norm.
    pub fn sup_bound(&self) -> f64 {
        self.coeffs[0].re.abs() + 2.0 * self.coeffs[1..].iter().map(|c| c.norm()).sum::<f64>()
    }
}

/// An element of `SU(1,1)` acting by `z ↦ (az + b)/(b̄z + ā)`.
///
/// `turns` selects the lift: the boundary displacement is
/// `2 arg a + 2 arg(1 + (b/a) e^{-ix}) + 2π·turns`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    a: Complex64,
    b: Complex64,
    turns: i64,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let defect = (a.norm_sqr() - b.norm_sqr() - 1.0).abs();
        if !(defect <= UNIMODULAR_TOL * a.norm_sqr().max(1.0)) {
            return Err(Error::NotUnimodular { defect });
        }
        Ok(Self { a, b, turns: 0 })
    }

    /// Rescales `(a, b)` to unit determinant. Requires `|a| > |b|`.
    pub fn normalized(a: Complex64, b: Complex64) -> Result<Self> {
        let det = a.norm_sqr() - b.norm_sqr();
        if !(det > 0.0) {
            return Err(Error::Invalid("Möbius parameters need |a| > |b|".into()));
        }
        let s = det.sqrt();
        Ok(Self {
            a: a / s,
            b: b / s,
            turns: 0,
        })
    }

    pub fn identity() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            turns: 0,
        }
    }

    /// Rotation by `θ`, i.e. `a = e^{iθ/2}`, `b = 0`.
    pub fn rotation(theta: f64) -> Self {
        let turns = (theta / TAU).round();
        let rest = theta - turns * TAU;
        Self {
            a: Complex64::from_polar(1.0, rest / 2.0),
            b: Complex64::new(0.0, 0.0),
            turns: turns as i64,
        }
    }

    /// The hyperbolic element `a = cosh t`, `b = sinh t`, fixing `±1`.
    pub fn hyperbolic(t: f64) -> Self {
        Self {
            a: Complex64::new(t.cosh(), 0.0),
            b: Complex64::new(t.sinh(), 0.0),
            turns: 0,
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// Action on the extended plane.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    /// Derivative of [`MoebiusMap::apply`]; `1/(b̄z + ā)²` for unit determinant.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let d = self.b.conj() * z + self.a.conj();
        1.0 / (d * d)
    }

    fn base_displacement(&self, x: f64) -> f64 {
        let ratio = self.b / self.a;
        let q = 1.0 + ratio * Complex64::from_polar(1.0, -x);
        2.0 * self.a.arg() + 2.0 * q.arg()
    }

    pub fn displacement(&self, x: f64) -> f64 {
        self.base_displacement(x) + TAU * self.turns as f64
    }

    /// Composition `self ∘ other` by the 2×2 matrix product, with the lift
    /// chosen to agree with composing the two lifts.
    pub fn compose(&self, other: &Self) -> Self {
        let (a1, b1, a2, b2) = (self.a, self.b, other.a, other.b);
        let mut out = Self {
            a: a1 * a2 + b1 * b2.conj(),
            b: a1 * b2 + b1 * a2.conj(),
            turns: 0,
        };
        let d2 = other.displacement(0.0);
        let target = d2 + self.displacement(d2);
        out.turns = ((target - out.base_displacement(0.0)) / TAU).round() as i64;
        out
    }

    pub fn inverse(&self) -> Self {
        let mut out = Self {
            a: self.a.conj(),
            b: -self.b,
            turns: 0,
        };
        let y = self.displacement(0.0);
        // want y + d_inv(y) = 0
        out.turns = (-(y + out.base_displacement(y)) / TAU).round() as i64;
        out
    }

    pub fn unimodular_defect(&self) -> f64 {
        (self.a.norm_sqr() - self.b.norm_sqr() - 1.0).abs()
    }
}

/// Time-`t` flow of `dx/ds = v(x)`, evaluated pointwise with classical RK4.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowMap {
    field: VectorField,
    time: f64,
    steps: usize,
}

impl FlowMap {
    pub fn field(&self) -> &VectorField {
        &self.field
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn displacement(&self, x: f64) -> f64 {
        if self.time == 0.0 {
            return 0.0;
        }
        let h = self.time / self.steps as f64;
        let v = |d: f64| self.field.eval(x + d);
        let mut d = 0.0;
        for _ in 0..self.steps {
            let k1 = v(d);
            let k2 = v(d + 0.5 * h * k1);
            let k3 = v(d + 0.5 * h * k2);
            let k4 = v(d + h * k3);
            d += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        d
    }
}

/// A lift known on the uniform grid `x_j = 2πj/n`, interpolated by a monotone
/// (Fritsch–Butland) cubic Hermite spline.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledLift {
    disp: Vec<f64>,
    slopes: Vec<f64>,
}

impl SampledLift {
    /// Builds a lift from displacement samples `η̃(x_j) − x_j`.
    pub fn from_displacements(disp: Vec<f64>) -> Result<Self> {
        let n = disp.len();
        if n < 2 {
            return Err(Error::Invalid(
                "a sampled lift needs at least two nodes".into(),
            ));
        }
        let h = TAU / n as f64;
        // secant slopes of the lift itself
        let secants: Vec<f64> = (0..n)
            .map(|j| {
                let next = if j + 1 == n { disp[0] } else { disp[j + 1] };
                1.0 + (next - disp[j]) / h
            })
            .collect();
        if let Some(index) = secants.iter().position(|&s| !(s > 0.0)) {
            return Err(Error::NonMonotone { index });
        }
        let slopes = (0..n)
            .map(|j| {
                let (l, r) = (secants[(j + n - 1) % n], secants[j]);
                2.0 * l * r / (l + r)
            })
            .collect();
        Ok(Self { disp, slopes })
    }

    /// Samples any map's displacement on `nodes` grid points.
    pub fn sample(map: &CircleMap, nodes: usize) -> Result<Self> {
        let disp =
            crate::par::map_indices(nodes, |j| map.displacement(TAU * j as f64 / nodes as f64));
        Self::from_displacements(disp)
    }

    pub fn nodes(&self) -> usize {
        self.disp.len()
    }

    pub fn displacements(&self) -> &[f64] {
        &self.disp
    }

    pub fn displacement(&self, x: f64) -> f64 {
        let n = self.disp.len();
        let h = TAU / n as f64;
        let xr = x.rem_euclid(TAU);
        let s = xr / h;
        let j = (s.floor() as usize).min(n - 1);
        let tau = s - j as f64;
        let k = (j + 1) % n;
        let (d0, d1) = (self.disp[j], self.disp[k]);
        let (m0, m1) = (self.slopes[j] - 1.0, self.slopes[k] - 1.0);
        let t2 = tau * tau;
        let t3 = t2 * tau;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + tau;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * d0 + h10 * h * m0 + h01 * d1 + h11 * h * m1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CircleMap {
    Moebius(MoebiusMap),
    Flow(FlowMap),
    Lift(SampledLift),
    /// Maps applied in order: `[g, f]` is `f ∘ g`.
    Composite(Vec<CircleMap>),
}

impl CircleMap {
    pub fn identity() -> Self {
        CircleMap::Moebius(MoebiusMap::identity())
    }

    pub fn rotation(theta: f64) -> Self {
        CircleMap::Moebius(MoebiusMap::rotation(theta))
    }

    pub fn moebius(a: Complex64, b: Complex64) -> Result<Self> {
        MoebiusMap::new(a, b).map(CircleMap::Moebius)
    }

    /// `η̃(x) − x`, periodic in `x`.
    pub fn displacement(&self, x: f64) -> f64 {
        match self {
            CircleMap::Moebius(m) => m.displacement(x),
            CircleMap::Flow(f) => f.displacement(x),
            CircleMap::Lift(l) => l.displacement(x),
            CircleMap::Composite(maps) => {
                let mut d = 0.0;
                for m in maps {
                    d += m.displacement(x + d);
                }
                d
            }
        }
    }

    /// The lift `η̃(x)`.
    pub fn evaluate(&self, x: f64) -> f64 {
        x + self.displacement(x)
    }

    /// Displacements on the grid `x_j = 2πj/samples`, computed in parallel.
    pub fn displacement_samples(&self, samples: usize) -> Vec<f64> {
        crate::par::map_indices(samples, |j| {
            self.displacement(TAU * j as f64 / samples as f64)
        })
    }

    /// Checks strict monotonicity of the lift on a uniform grid.
    pub fn check_monotone(&self, nodes: usize) -> Result<()> {
        let disp = self.displacement_samples(nodes);
        let h = TAU / nodes as f64;
        for j in 0..nodes {
            let next = if j + 1 == nodes { disp[0] } else { disp[j + 1] };
            if !(h + next - disp[j] > 0.0) {
                return Err(Error::NonMonotone { index: j });
            }
        }
        Ok(())
    }

    fn flatten(self, out: &mut Vec<CircleMap>) {
        match self {
            CircleMap::Composite(maps) => maps.into_iter().for_each(|m| m.flatten(out)),
            other => out.push(other),
        }
    }
}

/// `f ∘ g`. Möbius pairs compose in closed form; anything else becomes a lazy
/// composite evaluated exactly through both maps.
pub fn compose(f: &CircleMap, g: &CircleMap) -> CircleMap {
    if let (CircleMap::Moebius(mf), CircleMap::Moebius(mg)) = (f, g) {
        return CircleMap::Moebius(mf.compose(mg));
    }
    if *g == CircleMap::identity() {
        return f.clone();
    }
    if *f == CircleMap::identity() {
        return g.clone();
    }
    let mut maps = Vec::new();
    g.clone().flatten(&mut maps);
    f.clone().flatten(&mut maps);
    CircleMap::Composite(maps)
}

/// Inverse map. Möbius: `(ā, −b)`; flows: reversed time; sampled lifts:
/// per-node bisection on the interpolant.
pub fn invert(map: &CircleMap) -> Result<CircleMap> {
    Ok(match map {
        CircleMap::Moebius(m) => CircleMap::Moebius(m.inverse()),
        CircleMap::Flow(f) => CircleMap::Flow(FlowMap {
            field: f.field.clone(),
            time: -f.time,
            steps: f.steps,
        }),
        CircleMap::Lift(l) => CircleMap::Lift(invert_lift(l)?),
        CircleMap::Composite(maps) => {
            CircleMap::Composite(maps.iter().rev().map(invert).collect::<Result<Vec<_>>>()?)
        }
    })
}

fn invert_lift(lift: &SampledLift) -> Result<SampledLift> {
    let n = lift.nodes();
    let map = CircleMap::Lift(lift.clone());
    let disp = crate::par::map_indices(n, |j| {
        let target = TAU * j as f64 / n as f64;
        preimage(&map, target).map(|y| y - target)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    SampledLift::from_displacements(disp)
}

/// Solves `η̃(y) = target` by bisection.
pub fn preimage(map: &CircleMap, target: f64) -> Result<f64> {
    // |d| is bounded by the sup of the displacement, which for a lift of a
    // circle homeomorphism satisfies min d ≤ target − y ≤ max d.
    let guess = target - map.displacement(target);
    let mut lo = guess - PI;
    let mut hi = guess + PI;
    let f = |y: f64| map.evaluate(y) - target;
    let mut widen = 0;
    while f(lo) > 0.0 || f(hi) < 0.0 {
        lo -= TAU;
        hi += TAU;
        widen += 1;
        if widen > 4 {
            return Err(Error::BisectionFailed { target });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm.is_nan() {
            return Err(Error::BisectionFailed { target });
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Time-`t` flow of `v` with `steps` RK4 substeps, verified monotone on the
/// default lift grid.
pub fn flow_map(field: &VectorField, time: f64, steps: usize) -> Result<CircleMap> {
    if steps == 0 {
        return Err(Error::Invalid(
            "flow integration needs at least one step".into(),
        ));
    }
    if time == 0.0 {
        return Ok(CircleMap::identity());
    }
    let map = CircleMap::Flow(FlowMap {
        field: field.clone(),
        time,
        steps,
    });
    map.check_monotone(DEFAULT_LIFT_NODES)?;
    Ok(map)
}

/// Flow with the default step density.
pub fn flow(field: &VectorField, time: f64) -> Result<CircleMap> {
    flow_map(field, time, default_steps(time))
}

pub fn default_steps(time: f64) -> usize {
    ((DEFAULT_STEPS_PER_UNIT_TIME * time.abs()).ceil() as usize).max(1)
}

/// Uniform quasisymmetry grid: `nx` base points in `[0, 2π)` and `nt` offsets
/// `t_max·k/nt`, `k = 1..=nt`.
pub fn qs_grid(nx: usize, nt: usize, t_max: f64) -> (Vec<f64>, Vec<f64>) {
    let xs = (0..nx).map(|i| TAU * i as f64 / nx as f64).collect();
    let ts = (1..=nt).map(|k| t_max * k as f64 / nt as f64).collect();
    (xs, ts)
}

/// Largest symmetric difference ratio `max(r, 1/r)` with
/// `r = (η̃(x+t) − η̃(x)) / (η̃(x) − η̃(x−t))` over the grid.
pub fn qs_ratio(map: &CircleMap, xs: &[f64], ts: &[f64]) -> Result<f64> {
    if let Some(&t) = ts
        .iter()
        .find(|&&t| t == 0.0 || !t.is_finite() || t.abs() > PI)
    {
        return Err(Error::Invalid(format!(
            "offset t = {t} outside 0 < |t| ≤ π"
        )));
    }
    let rows = crate::par::map_slice(xs, |&x| {
        let d0 = map.displacement(x);
        let mut worst: f64 = 1.0;
        for &t in ts {
            let fwd = t + (map.displacement(x + t) - d0);
            let back = t + (d0 - map.displacement(x - t));
            if fwd == 0.0 || back == 0.0 || fwd.signum() != back.signum() {
                return Err(Error::NonMonotone { index: 0 });
            }
            let r = fwd / back;
            worst = worst.max(r).max(1.0 / r);
        }
        Ok(worst)
    });
    rows.into_iter()
        .try_fold(1.0_f64, |acc, r| r.map(|r| acc.max(r)))
}

/// The `PSU(1,1)` element sending `e^{ip_k}` to `e^{iq_k}`, `k = 1, 2, 3`.
pub fn fit_moebius_three_points(p: [f64; 3], q: [f64; 3]) -> Result<MoebiusMap> {
    let pz = p.map(|t| Complex64::from_polar(1.0, t));
    let qz = q.map(|t| Complex64::from_polar(1.0, t));
    for pts in [&pz, &qz] {
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            if (pts[i] - pts[j]).norm() < 1e-12 {
                return Err(Error::DegenerateTriple("coincident points"));
            }
        }
    }
    // sends z1, z2, z3 to 0, 1, ∞
    let cross = |z: &[Complex64; 3]| {
        [
            [z[1] - z[2], -z[0] * (z[1] - z[2])],
            [z[1] - z[0], -z[2] * (z[1] - z[0])],
        ]
    };
    let tp = cross(&pz);
    let tq = cross(&qz);
    let tq_inv = [[tq[1][1], -tq[0][1]], [-tq[1][0], tq[0][0]]];
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = tq_inv[i][0] * tp[0][j] + tq_inv[i][1] * tp[1][j];
        }
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let s = det.sqrt();
    let (a, b) = (m[0][0] / s, m[0][1] / s);
    let (c, d) = (m[1][0] / s, m[1][1] / s);
    let scale = a.norm().max(b.norm());
    if (d - a.conj()).norm() > 1e-8 * scale || (c - b.conj()).norm() > 1e-8 * scale {
        return Err(Error::DegenerateTriple(
            "triples have opposite cyclic order",
        ));
    }
    let mut fit = MoebiusMap::normalized(a, b)?;
    fit.turns = ((q[0] - p[0] - fit.base_displacement(p[0])) / TAU).round() as i64;
    Ok(fit)
}

/// Angles of `1`, `−1` and `−i`, the three points fixed by normalized maps.
pub const NORMALIZATION_POINTS: [f64; 3] = [0.0, PI, 1.5 * PI];

/// Post-composes `map` with the Möbius map that restores `1, −1, −i`.
pub fn normalize_three_points(map: &CircleMap) -> Result<CircleMap> {
    let images = NORMALIZATION_POINTS.map(|x| map.evaluate(x));
    let fix = fit_moebius_three_points(images, NORMALIZATION_POINTS)?;
    Ok(compose(&CircleMap::Moebius(fix), map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn grid(n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |j| TAU * j as f64 / n as f64)
    }

    fn sup_diff(f: &CircleMap, g: &CircleMap, n: usize) -> f64 {
        grid(n)
            .map(|x| (f.evaluate(x) - g.evaluate(x)).abs())
            .fold(0.0, f64::max)
    }

    fn sample_field() -> VectorField {
        VectorField::new(vec![
            Complex64::new(0.02, 0.0),
            Complex64::new(0.05, -0.03),
            Complex64::new(-0.02, 0.04),
            Complex64::new(0.01, 0.01),
        ])
        .unwrap()
    }

    #[test]
    fn rotation_and_identity() {
        let r = CircleMap::rotation(0.7);
        for x in grid(16) {
            assert!(close(r.evaluate(x), x + 0.7, 1e-15));
            assert_eq!(CircleMap::identity().evaluate(x), x);
        }
    }

    #[test]
    fn hyperbolic_fixes_one() {
        let m = CircleMap::Moebius(MoebiusMap::hyperbolic(0.8));
        assert!(m.evaluate(0.0).abs() < 1e-15);
        assert!(close(m.evaluate(PI), PI, 1e-14));
    }

    #[test]
    fn moebius_boundary_action_matches_lift() {
        let m =
            MoebiusMap::normalized(Complex64::new(1.1, 0.4), Complex64::new(-0.3, 0.5)).unwrap();
        let map = CircleMap::Moebius(m);
        for x in grid(32) {
            let w = m.apply(Complex64::from_polar(1.0, x));
            assert!(close(w.norm(), 1.0, 1e-14));
            let y = map.evaluate(x);
            assert!((Complex64::from_polar(1.0, y) - w).norm() < 1e-14);
        }
        map.check_monotone(1024).unwrap();
    }

    #[test]
    fn moebius_rejects_bad_determinant() {
        assert!(matches!(
            MoebiusMap::new(Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)),
            Err(Error::NotUnimodular { .. })
        ));
    }

    #[test]
    fn compose_rotations_and_identity() {
        let c = compose(&CircleMap::rotation(0.4), &CircleMap::rotation(1.1));
        assert!(sup_diff(&c, &CircleMap::rotation(1.5), 64) < 1e-14);
        let f = CircleMap::Flow(FlowMap {
            field: sample_field(),
            time: 1.0,
            steps: 64,
        });
        assert_eq!(compose(&f, &CircleMap::identity()), f);
    }

    #[test]
    fn moebius_product_matches_pointwise_composition() {
        let m1 =
            MoebiusMap::normalized(Complex64::new(1.2, -0.3), Complex64::new(0.4, 0.2)).unwrap();
        let m2 =
            MoebiusMap::normalized(Complex64::new(-0.9, 0.8), Complex64::new(0.1, -0.6)).unwrap();
        let (f, g) = (CircleMap::Moebius(m1), CircleMap::Moebius(m2));
        let c = compose(&f, &g);
        assert!(matches!(c, CircleMap::Moebius(_)));
        for x in grid(64) {
            assert!(close(c.evaluate(x), f.evaluate(g.evaluate(x)), 1e-12));
        }
        // 2×2 matrix product oracle
        let (a1, b1, a2, b2) = (m1.a(), m1.b(), m2.a(), m2.b());
        let mat = |a: Complex64, b: Complex64| [[a, b], [b.conj(), a.conj()]];
        let (p, q) = (mat(a1, b1), mat(a2, b2));
        let prod00 = p[0][0] * q[0][0] + p[0][1] * q[1][0];
        let prod01 = p[0][0] * q[0][1] + p[0][1] * q[1][1];
        if let CircleMap::Moebius(m) = c {
            assert!((m.a() - prod00).norm() < 1e-14 && (m.b() - prod01).norm() < 1e-14);
            assert!(m.unimodular_defect() < 1e-13);
        }
    }

    #[test]
    fn moebius_inverse() {
        let m =
            MoebiusMap::normalized(Complex64::new(-1.0, 0.9), Complex64::new(0.7, 0.3)).unwrap();
        let f = CircleMap::Moebius(m);
        let inv = invert(&f).unwrap();
        for x in grid(64) {
            assert!(close(f.evaluate(inv.evaluate(x)), x, 1e-12));
            assert!(close(inv.evaluate(f.evaluate(x)), x, 1e-12));
        }
        let r = invert(&CircleMap::rotation(0.3)).unwrap();
        assert!(sup_diff(&r, &CircleMap::rotation(-0.3), 16) < 1e-15);
        assert_eq!(
            invert(&CircleMap::identity()).unwrap(),
            CircleMap::identity()
        );
    }

    #[test]
    fn flow_examples() {
        assert_eq!(
            flow(&VectorField::zero(), 0.0).unwrap(),
            CircleMap::identity()
        );
        let translate = flow(&VectorField::constant(1.0), 0.9).unwrap();
        assert!(sup_diff(&translate, &CircleMap::rotation(0.9), 64) < 1e-14);
        let zero_field = flow_map(&VectorField::zero(), 1.5, 10).unwrap();
        assert!(sup_diff(&zero_field, &CircleMap::identity(), 64) == 0.0);
        assert!(flow_map(&sample_field(), 1.0, 0).is_err());
    }

    #[test]
    fn flow_reversibility() {
        let v = sample_field();
        let f = flow(&v, 1.0).unwrap();
        let back = flow(&v, -1.0).unwrap();
        let inv = invert(&f).unwrap();
        for x in grid(256) {
            assert!(close(compose(&f, &back).evaluate(x), x, 1e-9));
            assert!(close(back.evaluate(x), inv.evaluate(x), 0.0));
        }
    }

    #[test]
    fn sampled_lift_interpolates_and_inverts() {
        let v = sample_field();
        let f = flow(&v, 1.0).unwrap();
        let lift = SampledLift::sample(&f, DEFAULT_LIFT_NODES).unwrap();
        let lifted = CircleMap::Lift(lift);
        // exact at nodes
        for x in grid(DEFAULT_LIFT_NODES).step_by(97) {
            assert!(close(lifted.evaluate(x), f.evaluate(x), 1e-14));
        }
        // off-grid: third-order accurate
        let off = (0..500).map(|k| 0.0123 + k as f64 * 0.01256);
        let err = off
            .map(|x| (lifted.evaluate(x) - f.evaluate(x)).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-7, "interpolation error {err}");
        let inv = invert(&lifted).unwrap();
        let round = compose(&lifted, &inv);
        for x in grid(DEFAULT_LIFT_NODES) {
            assert!(close(round.evaluate(x), x, 1e-9));
        }
    }

    #[test]
    fn sampled_lift_rejects_non_monotone() {
        let mut disp = vec![0.0; 16];
        disp[5] = -1.0;
        assert!(matches!(
            SampledLift::from_displacements(disp),
            Err(Error::NonMonotone { index: 4 })
        ));
    }

    #[test]
    fn lift_is_equivariant() {
        let f = flow(&sample_field(), 0.7).unwrap();
        for x in grid(16) {
            assert!(close(f.evaluate(x + TAU), f.evaluate(x) + TAU, 1e-12));
        }
    }

    #[test]
    fn qs_ratio_examples() {
        let (xs, ts) = qs_grid(64, 16, PI);
        assert_eq!(qs_ratio(&CircleMap::identity(), &xs, &ts).unwrap(), 1.0);
        assert_eq!(qs_ratio(&CircleMap::rotation(1.3), &xs, &ts).unwrap(), 1.0);
        let m =
            |t: f64| qs_ratio(&CircleMap::Moebius(MoebiusMap::hyperbolic(t)), &xs, &ts).unwrap();
        assert!(m(0.5) > 1.0);
        assert!(m(0.2) < m(0.5) && m(0.5) < m(0.9));
        assert!(qs_ratio(&CircleMap::identity(), &xs, &[0.0]).is_err());
    }

    #[test]
    fn qs_ratio_dense_grid_oracle() {
        // brute force over a finer grid bounds the coarse estimate from above
        let map = CircleMap::Moebius(MoebiusMap::hyperbolic(0.5));
        let (xs, ts) = qs_grid(64, 16, PI);
        let coarse = qs_ratio(&map, &xs, &ts).unwrap();
        let (fx, ft) = qs_grid(512, 128, PI);
        let fine = qs_ratio(&map, &fx, &ft).unwrap();
        assert!(fine >= coarse - 1e-12);
        assert!(fine / coarse < 1.05);
    }

    #[test]
    fn fit_three_points() {
        let p = NORMALIZATION_POINTS;
        let id = fit_moebius_three_points(p, p).unwrap();
        assert!((id.a() - Complex64::new(1.0, 0.0)).norm() < 1e-12 && id.b().norm() < 1e-12);
        let theta = 0.6;
        let q = p.map(|x| x - theta);
        let rot = CircleMap::Moebius(fit_moebius_three_points(p, q).unwrap());
        assert!(sup_diff(&rot, &CircleMap::rotation(-theta), 32) < 1e-12);
        assert!(fit_moebius_three_points([0.0, 0.0, 1.0], p).is_err());
        assert!(fit_moebius_three_points([0.0, 1.5 * PI, PI], p).is_err());
    }

    #[test]
    fn normalization_fixes_three_points() {
        let m = CircleMap::Moebius(
            MoebiusMap::normalized(Complex64::new(1.0, 0.3), Complex64::new(0.2, -0.4)).unwrap(),
        );
        let f = compose(&flow(&sample_field(), 1.0).unwrap(), &m);
        for map in [m, f] {
            let n = normalize_three_points(&map).unwrap();
            for x in NORMALIZATION_POINTS {
                assert!(close(n.evaluate(x), x, 1e-10), "{} vs {x}", n.evaluate(x));
            }
        }
    }
}
