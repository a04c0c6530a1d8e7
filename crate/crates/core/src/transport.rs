//! Fixed-step RK4 integration of geodesics, horizontal lifts and parallel
//! transport, all in 𝔪-coordinates with the frame `g(t)` carried alongside.
//!
//! Time grids are uniform: a requested step `h` over `[t0, t1]` becomes
//! `n = ceil((t1 − t0)/h)` steps of size `(t1 − t0)/n`. The step actually
//! used is recorded in the trajectory metadata.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::GroupElement;
use crate::connection::AlphaMap;
use crate::error::{Error, Result};
use crate::linalg::{self, lagrange_derivative_weights, stencil_window, Mat};
use crate::reductive::{MetricOnM, ReductiveDecomposition};

/// `‖x‖_∞` above which integration aborts.
pub const BLOW_UP_NORM: f64 = 1e6;
/// Largest acceptable 𝔥-component of `g⁻¹ġ`.
pub const HORIZONTALITY_TOL: f64 = 1e-8;
/// Disagreement between 5-point and 3-point derivative estimates above
/// which samples are flagged as too coarse.
pub const COARSE_TOL: f64 = 1e-4;
/// `|field(x) + α_LC(x,x)|` bound checked by [`EulerArnold::field`] callers.
pub const EULER_ARNOLD_TOL: f64 = 1e-10;
/// Errors below this are treated as exact by the convergence probe.
pub const EXACT_FLOOR: f64 = 1e-13;

pub const INTEGRATOR: &str = "rk4";

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrajectoryMeta {
    pub integrator: String,
    /// Step actually used (uniform grids) or the largest sample spacing.
    pub step: f64,
    pub alpha_label: Option<String>,
    /// `max ‖gᵀg − I‖_∞` over the frames, for orthogonal algebras.
    pub max_group_drift: Option<f64>,
    pub horizontality_leak: f64,
    pub reprojected: bool,
    pub tainted: bool,
    pub warnings: Vec<String>,
}

/// How `x(t)` is evaluated between samples.
#[derive(Clone, Debug, PartialEq)]
enum VelocityModel {
    Constant(Vec<f64>),
    /// Linear interpolation through `(times, values)`.
    Linear {
        times: Vec<f64>,
        values: Vec<Vec<f64>>,
    },
    /// Cubic Hermite through the trajectory's own samples.
    Sampled,
}

/// Sampled curve in G/H through its horizontal frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub frames: Vec<GroupElement>,
    /// `x(t_i)`: 𝔪-coordinates of `g⁻¹ġ`.
    pub velocities: Vec<Vec<f64>>,
    /// `z(t_i)` when a vector was transported.
    pub transported: Option<Vec<Vec<f64>>>,
    pub meta: TrajectoryMeta,
    model: VelocityModel,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_frame(&self) -> Option<&GroupElement> {
        self.frames.last()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IntegratorOptions {
    /// Replace each frame by its orthogonal polar factor after every step
    /// (orthogonal algebras only).
    pub reproject: bool,
}

/// Curve in G/H given through one of its horizontal descriptions.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveSpec {
    /// `γ(t) = g0·exp((t − t0)X)·o` for `X ∈ 𝔪`.
    OneParameter(Vec<f64>),
    /// Samples of `x(t)`, linearly interpolated.
    PiecewiseVelocity {
        times: Vec<f64>,
        velocities: Vec<Vec<f64>>,
    },
    /// Samples `(t_i, c(t_i))` of an arbitrary curve in G; lifted
    /// horizontally.
    GroupSamples {
        times: Vec<f64>,
        frames: Vec<GroupElement>,
    },
}

/// `n` uniform steps covering `[t0, t1]` with spacing at most `step`.
pub fn uniform_grid(t0: f64, t1: f64, step: f64) -> Result<(Vec<f64>, f64)> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidStep(step));
    }
    if !t0.is_finite() || !t1.is_finite() {
        return Err(Error::NonFinite("time span"));
    }
    let span = t1 - t0;
    if !(span > 0.0) {
        return Err(Error::EmptySpan);
    }
    let n = libm::ceil(span / step * (1.0 - 1e-12)).max(1.0) as usize;
    let h = span / n as f64;
    let mut times: Vec<f64> = (0..=n).map(|i| t0 + i as f64 * h).collect();
    times[n] = t1;
    Ok((times, h))
}

fn rk4_step(f: &impl Fn(usize, &[f64]) -> Vec<f64>, y: &[f64], h: f64) -> Vec<f64> {
    // f(stage, y) with stage 0 = start, 1 = midpoint, 2 = end.
    let k1 = f(0, y);
    let y2: Vec<f64> = y.iter().zip(&k1).map(|(a, k)| a + 0.5 * h * k).collect();
    let k2 = f(1, &y2);
    let y3: Vec<f64> = y.iter().zip(&k2).map(|(a, k)| a + 0.5 * h * k).collect();
    let k3 = f(1, &y3);
    let y4: Vec<f64> = y.iter().zip(&k3).map(|(a, k)| a + h * k).collect();
    let k4 = f(2, &y4);
    (0..y.len())
        .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

fn frame_drift(dec: &ReductiveDecomposition, frames: &[GroupElement]) -> Option<f64> {
    dec.algebra()
        .is_orthogonal()
        .then(|| frames.iter().map(|g| g.orthogonality_drift()).fold(0.0, f64::max))
}

/// Largest 𝔥-component of `M` read as an element of 𝔤.
fn h_leak_of_matrix(dec: &ReductiveDecomposition, m: &Mat) -> Result<f64> {
    let (c, _) = dec.algebra().coords_with_residual(m)?;
    Ok(linalg::norm_inf(&dec.split(&c).0))
}

fn check_frame(dec: &ReductiveDecomposition, g: &GroupElement) -> Result<()> {
    let d = dec
        .algebra()
        .matrix_size()
        .ok_or(Error::MissingMatrixRealization)?;
    if g.size() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: g.size(),
        });
    }
    Ok(())
}

/// Integrates `ẋ = rhs(x)`, `ġ = g·matrix(x)` with RK4.
fn integrate_frame_and_velocity(
    dec: &ReductiveDecomposition,
    g0: &GroupElement,
    x0: &[f64],
    t0: f64,
    t1: f64,
    step: f64,
    opts: IntegratorOptions,
    rhs: impl Fn(&[f64]) -> Vec<f64>,
) -> Result<Trajectory> {
    check_frame(dec, g0)?;
    dec.check_m_len(x0)?;
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial velocity"));
    }
    let (times, h) = uniform_grid(t0, t1, step)?;
    let d = g0.size();
    let nm = x0.len();
    let dd = d * d;
    let reproject = opts.reproject && dec.algebra().is_orthogonal();

    let f = |_: usize, y: &[f64]| -> Vec<f64> {
        let (gs, xs) = y.split_at(dd);
        let g = Mat::from_row_major(d, d, gs.to_vec()).expect("frame block");
        let m = dec.m_matrix(xs).expect("matrix realization checked");
        let mut out = g.matmul(&m).into_vec();
        out.extend(rhs(xs));
        out
    };

    let mut traj = Trajectory {
        times: Vec::with_capacity(times.len()),
        frames: Vec::with_capacity(times.len()),
        velocities: Vec::with_capacity(times.len()),
        transported: None,
        meta: TrajectoryMeta {
            integrator: INTEGRATOR.into(),
            step: h,
            reprojected: reproject,
            ..Default::default()
        },
        model: VelocityModel::Sampled,
    };
    let mut y: Vec<f64> = g0.matrix().as_slice().to_vec();
    y.extend_from_slice(x0);
    traj.times.push(times[0]);
    traj.frames.push(g0.clone());
    traj.velocities.push(x0.to_vec());
    let mut leak = h_leak_of_matrix(dec, &dec.m_matrix(x0)?)?;

    for &t in &times[1..] {
        let mut next = rk4_step(&f, &y, h);
        let xn = &next[dd..];
        let norm = linalg::norm_inf(xn);
        if !(norm <= BLOW_UP_NORM) || next[..dd].iter().any(|v| !v.is_finite()) {
            traj.meta.max_group_drift = frame_drift(dec, &traj.frames);
            traj.meta.horizontality_leak = leak;
            return Err(Error::BlowUp {
                time: t,
                norm,
                partial: Box::new(traj),
            });
        }
        let mut gm = Mat::from_row_major(d, d, next[..dd].to_vec())?;
        if reproject {
            gm = linalg::polar_orthogonal(&gm)?;
            next[..dd].copy_from_slice(gm.as_slice());
        }
        leak = leak.max(h_leak_of_matrix(dec, &dec.m_matrix(&next[dd..])?)?);
        traj.times.push(t);
        traj.frames.push(GroupElement::new_unchecked(gm));
        traj.velocities.push(next[dd..dd + nm].to_vec());
        y = next;
    }
    traj.meta.max_group_drift = frame_drift(dec, &traj.frames);
    traj.meta.horizontality_leak = leak;
    Ok(traj)
}

/// Geodesic of ∇^α: `ẋ = −α(x,x)`, `ġ = g·matrix(x)`, from `(g0, x0)`.
pub fn geodesic(
    alpha: &AlphaMap,
    g0: &GroupElement,
    x0: &[f64],
    t0: f64,
    t1: f64,
    step: f64,
    opts: IntegratorOptions,
) -> Result<Trajectory> {
    let result = integrate_frame_and_velocity(alpha.decomposition(), g0, x0, t0, t1, step, opts, |x| {
        alpha.coeffs().contract(x, x).into_iter().map(|v| -v).collect()
    });
    let label = |t: &mut Trajectory| {
        t.meta.alpha_label = Some(alpha.label().as_str().into());
        t.meta.tainted = alpha.is_tainted();
    };
    match result {
        Ok(mut t) => {
            label(&mut t);
            Ok(t)
        }
        Err(Error::BlowUp {
            time,
            norm,
            mut partial,
        }) => {
            label(&mut partial);
            Err(Error::BlowUp { time, norm, partial })
        }
        Err(e) => Err(e),
    }
}

/// Base trajectory for a curve, suitable for [`parallel_transport`].
///
/// `g0` is the initial frame (identity by default; for group samples the
/// default is the first sample). `t_span` defaults to the sample range and
/// is required for one-parameter curves. `step` sets the integration grid
/// except for group samples, which are lifted on their own times.
pub fn base_trajectory(
    dec: &ReductiveDecomposition,
    curve: &CurveSpec,
    g0: Option<&GroupElement>,
    t_span: Option<(f64, f64)>,
    step: f64,
    opts: IntegratorOptions,
) -> Result<Trajectory> {
    let d = dec
        .algebra()
        .matrix_size()
        .ok_or(Error::MissingMatrixRealization)?;
    let identity = GroupElement::identity(d);
    match curve {
        CurveSpec::OneParameter(x) => {
            let g0 = g0.unwrap_or(&identity);
            check_frame(dec, g0)?;
            dec.check_m_len(x)?;
            let (t0, t1) = t_span
                .ok_or_else(|| Error::InvalidParameter("one-parameter curve needs a time span".into()))?;
            let (times, h) = uniform_grid(t0, t1, step)?;
            let m = dec.m_matrix(x)?;
            let frames: Vec<GroupElement> = times
                .iter()
                .map(|&t| GroupElement::new_unchecked(g0.matrix().matmul(&linalg::expm(&m.scale(t - t0)))))
                .collect();
            let leak = h_leak_of_matrix(dec, &m)?;
            Ok(Trajectory {
                velocities: vec![x.clone(); times.len()],
                meta: TrajectoryMeta {
                    integrator: "closed_form_exp".into(),
                    step: h,
                    max_group_drift: frame_drift(dec, &frames),
                    horizontality_leak: leak,
                    ..Default::default()
                },
                times,
                frames,
                transported: None,
                model: VelocityModel::Constant(x.clone()),
            })
        }
        CurveSpec::PiecewiseVelocity { times, velocities } => {
            let g0 = g0.unwrap_or(&identity);
            check_frame(dec, g0)?;
            validate_samples(times, velocities.len(), 2)?;
            for v in velocities {
                dec.check_m_len(v)?;
                if v.iter().any(|c| !c.is_finite()) {
                    return Err(Error::NonFinite("velocity samples"));
                }
            }
            let (first, last) = (times[0], times[times.len() - 1]);
            let (t0, t1) = t_span.unwrap_or((first, last));
            if t0 < first || t1 > last {
                return Err(Error::InvalidParameter(format!(
                    "time span [{t0}, {t1}] exceeds the velocity samples [{first}, {last}]"
                )));
            }
            let (grid, h) = uniform_grid(t0, t1, step)?;
            let interp = |t: f64| linear_at(times, velocities, t);
            let reproject = opts.reproject && dec.algebra().is_orthogonal();
            let mut g = g0.matrix().clone();
            let mut frames = vec![g0.clone()];
            let mut leak = 0.0f64;
            for w in grid.windows(2) {
                let (ta, tb) = (w[0], w[1]);
                let ms = [
                    dec.m_matrix(&interp(ta))?,
                    dec.m_matrix(&interp(0.5 * (ta + tb)))?,
                    dec.m_matrix(&interp(tb))?,
                ];
                for m in &ms {
                    leak = leak.max(h_leak_of_matrix(dec, m)?);
                }
                let f = |s: usize, y: &[f64]| {
                    let gm = Mat::from_row_major(d, d, y.to_vec()).expect("frame block");
                    gm.matmul(&ms[s]).into_vec()
                };
                let mut next = Mat::from_row_major(d, d, rk4_step(&f, g.as_slice(), tb - ta))?;
                if reproject {
                    next = linalg::polar_orthogonal(&next)?;
                }
                if !next.is_finite() {
                    return Err(Error::NonFinite("frame"));
                }
                g = next;
                frames.push(GroupElement::new_unchecked(g.clone()));
            }
            Ok(Trajectory {
                velocities: grid.iter().map(|&t| interp(t)).collect(),
                meta: TrajectoryMeta {
                    integrator: INTEGRATOR.into(),
                    step: h,
                    max_group_drift: frame_drift(dec, &frames),
                    horizontality_leak: leak,
                    reprojected: reproject,
                    ..Default::default()
                },
                times: grid,
                frames,
                transported: None,
                model: VelocityModel::Linear {
                    times: times.clone(),
                    values: velocities.clone(),
                },
            })
        }
        CurveSpec::GroupSamples { times, frames } => {
            if t_span.is_some() {
                return Err(Error::InvalidParameter(
                    "group samples are lifted on their own times; no time span".into(),
                ));
            }
            let h0 = match (g0, frames.first()) {
                (Some(g0), Some(c0)) => Some(GroupElement::new(c0.matrix().inverse()?.matmul(g0.matrix()))?),
                _ => None,
            };
            horizontal_lift(dec, times, frames, h0.as_ref())
        }
    }
}

fn validate_samples(times: &[f64], count: usize, needed: usize) -> Result<()> {
    if times.len() != count {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            found: count,
        });
    }
    if times.len() < needed {
        return Err(Error::TooFewSamples {
            needed,
            found: times.len(),
        });
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite("sample times"));
    }
    for i in 1..times.len() {
        if !(times[i] > times[i - 1]) {
            return Err(Error::NotIncreasing { index: i });
        }
    }
    Ok(())
}

fn linear_at(times: &[f64], values: &[Vec<f64>], t: f64) -> Vec<f64> {
    let last = times.len() - 1;
    if t <= times[0] {
        return values[0].clone();
    }
    if t >= times[last] {
        return values[last].clone();
    }
    let j = times.partition_point(|&s| s <= t).min(last).max(1);
    let (ta, tb) = (times[j - 1], times[j]);
    let s = (t - ta) / (tb - ta);
    values[j - 1]
        .iter()
        .zip(&values[j])
        .map(|(a, b)| a + s * (b - a))
        .collect()
}

/// Lagrange-stencil derivative of vector samples at node `i`.
fn sample_derivative(times: &[f64], values: &[Vec<f64>], i: usize, width: usize) -> Vec<f64> {
    let (s, e) = stencil_window(i, times.len(), width);
    let w = lagrange_derivative_weights(&times[s..e], i - s);
    let mut d = vec![0.0; values[i].len()];
    for (k, wk) in w.iter().enumerate() {
        for (o, v) in d.iter_mut().zip(&values[s + k]) {
            *o += wk * v;
        }
    }
    d
}

/// Largest 5-point vs 3-point derivative disagreement.
fn coarseness(times: &[f64], values: &[Vec<f64>], derivs: &[Vec<f64>]) -> f64 {
    (0..times.len())
        .map(|i| linalg::max_abs_diff(&derivs[i], &sample_derivative(times, values, i, 3)))
        .fold(0.0, f64::max)
}

fn hermite_mid(x0: &[f64], x1: &[f64], d0: &[f64], d1: &[f64], h: f64) -> Vec<f64> {
    (0..x0.len())
        .map(|k| 0.5 * (x0[k] + x1[k]) + h * (d0[k] - d1[k]) / 8.0)
        .collect()
}

/// Horizontal lift `g = c·h` of sampled group elements `c(t_i)`, with
/// `ḣ = −pr_𝔥(c⁻¹ċ)·h` and `h(t0) = h0` (identity when absent).
pub fn horizontal_lift(
    dec: &ReductiveDecomposition,
    times: &[f64],
    samples: &[GroupElement],
    h0: Option<&GroupElement>,
) -> Result<Trajectory> {
    validate_samples(times, samples.len(), 3)?;
    let alg = dec.algebra();
    let d = alg.matrix_size().ok_or(Error::MissingMatrixRealization)?;
    for c in samples {
        check_frame(dec, c)?;
        if !c.matrix().is_finite() {
            return Err(Error::NonFinite("group samples"));
        }
    }
    let mut warnings = Vec::new();
    let inverses = samples
        .iter()
        .map(|c| {
            let det = c.matrix().determinant().unwrap_or(0.0);
            if libm::fabs(det) < crate::algebra::DETERMINANT_TOL {
                return Err(Error::NotInvertible { determinant: det });
            }
            c.matrix().inverse()
        })
        .collect::<Result<Vec<Mat>>>()?;
    let flat: Vec<Vec<f64>> = samples.iter().map(|c| c.matrix().as_slice().to_vec()).collect();

    // ξ_i = c⁻¹ċ in 𝔤-coordinates.
    let mut xi = Vec::with_capacity(times.len());
    let mut fit = 0.0f64;
    let dc5: Vec<Vec<f64>> = (0..times.len())
        .map(|i| sample_derivative(times, &flat, i, 5))
        .collect();
    let coarse = coarseness(times, &flat, &dc5);
    if coarse > COARSE_TOL {
        warnings.push(format!(
            "group samples coarse: derivative estimates disagree by {coarse:e}"
        ));
    }
    for (i, dc) in dc5.iter().enumerate() {
        let dcm = Mat::from_row_major(d, d, dc.clone())?;
        let (c, r) = alg.coords_with_residual(&inverses[i].matmul(&dcm))?;
        fit = fit.max(r);
        xi.push(c);
    }
    if fit > crate::algebra::BASIS_RESIDUAL_TOL {
        warnings.push(format!(
            "c^-1 dc/dt leaves the algebra by {fit:e}; samples may not lie in the group"
        ));
    }
    let dxi: Vec<Vec<f64>> = (0..times.len())
        .map(|i| sample_derivative(times, &xi, i, 5))
        .collect();

    let eta_matrix = |v: &[f64]| -> Result<Mat> {
        let (hc, _) = dec.split(v);
        alg.matrix_of(&dec.from_h_coords(&hc)?)
    };
    let mut h = match h0 {
        Some(h0) => {
            check_frame(dec, h0)?;
            h0.matrix().clone()
        }
        None => Mat::identity(d),
    };
    let mut hs = vec![h.clone()];
    let mut max_step = 0.0f64;
    for i in 0..times.len() - 1 {
        let dt = times[i + 1] - times[i];
        max_step = max_step.max(dt);
        let ms = [
            eta_matrix(&xi[i])?,
            eta_matrix(&hermite_mid(&xi[i], &xi[i + 1], &dxi[i], &dxi[i + 1], dt))?,
            eta_matrix(&xi[i + 1])?,
        ];
        let f = |s: usize, y: &[f64]| {
            let hm = Mat::from_row_major(d, d, y.to_vec()).expect("frame");
            ms[s].matmul(&hm).scale(-1.0).into_vec()
        };
        h = Mat::from_row_major(d, d, rk4_step(&f, h.as_slice(), dt))?;
        hs.push(h.clone());
    }

    let mut frames = Vec::with_capacity(times.len());
    let mut velocities = Vec::with_capacity(times.len());
    for i in 0..times.len() {
        let g = samples[i].matrix().matmul(&hs[i]);
        // g⁻¹ġ = h⁻¹ pr_𝔪(ξ) h
        let (_, xm) = dec.split(&xi[i]);
        let pm = dec.m_matrix(&xm)?;
        let hinv = hs[i].inverse()?;
        let (c, _) = alg.coords_with_residual(&hinv.matmul(&pm).matmul(&hs[i]))?;
        velocities.push(dec.split(&c).1);
        frames.push(GroupElement::new_unchecked(g));
    }

    // Independent horizontality measurement from the frames alone.
    let gflat: Vec<Vec<f64>> = frames.iter().map(|g| g.matrix().as_slice().to_vec()).collect();
    let mut leak = 0.0f64;
    for (i, g) in frames.iter().enumerate() {
        let dg = Mat::from_row_major(d, d, sample_derivative(times, &gflat, i, 5))?;
        leak = leak.max(h_leak_of_matrix(dec, &g.matrix().inverse()?.matmul(&dg))?);
    }
    if leak > HORIZONTALITY_TOL {
        warnings.push(format!(
            "horizontality leak {leak:e} exceeds {HORIZONTALITY_TOL:e}"
        ));
    }

    Ok(Trajectory {
        times: times.to_vec(),
        meta: TrajectoryMeta {
            integrator: INTEGRATOR.into(),
            step: max_step,
            max_group_drift: frame_drift(dec, &frames),
            horizontality_leak: leak,
            warnings,
            ..Default::default()
        },
        frames,
        velocities,
        transported: None,
        model: VelocityModel::Sampled,
    })
}

/// Transports `z0` along `base`: `ż = −α(x(t), z)`, on the base grid.
pub fn parallel_transport(alpha: &AlphaMap, base: &Trajectory, z0: &[f64]) -> Result<Trajectory> {
    if base.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let dec = alpha.decomposition();
    dec.check_m_len(z0)?;
    if let Some(x) = base.velocities.first() {
        dec.check_m_len(x)?;
    }
    if z0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("transported vector"));
    }
    let a = alpha.coeffs();
    let n = base.len();
    let mut out = base.clone();
    out.meta.alpha_label = Some(alpha.label().as_str().into());
    out.meta.tainted |= alpha.is_tainted();

    let derivs: Vec<Vec<f64>> = match base.model {
        VelocityModel::Sampled if n >= 2 => {
            let d5: Vec<Vec<f64>> = (0..n)
                .map(|i| sample_derivative(&base.times, &base.velocities, i, 5))
                .collect();
            let coarse = coarseness(&base.times, &base.velocities, &d5);
            if coarse > COARSE_TOL {
                out.meta.warnings.push(format!(
                    "base grid coarse for transport: velocity derivative estimates disagree by {coarse:e}"
                ));
            }
            d5
        }
        _ => Vec::new(),
    };

    let mut z = z0.to_vec();
    let mut zs = Vec::with_capacity(n);
    zs.push(z.clone());
    for i in 0..n - 1 {
        let (ta, tb) = (base.times[i], base.times[i + 1]);
        let dt = tb - ta;
        let xs = match &base.model {
            VelocityModel::Constant(x) => [x.clone(), x.clone(), x.clone()],
            VelocityModel::Linear { times, values } => [
                linear_at(times, values, ta),
                linear_at(times, values, 0.5 * (ta + tb)),
                linear_at(times, values, tb),
            ],
            VelocityModel::Sampled => {
                let (x0, x1) = (&base.velocities[i], &base.velocities[i + 1]);
                [
                    x0.clone(),
                    hermite_mid(x0, x1, &derivs[i], &derivs[i + 1], dt),
                    x1.clone(),
                ]
            }
        };
        // ż = −L(x) z with L(x)[k][j] = Σ_i a[k][i][j] x_i
        let ls: Vec<Mat> = xs.iter().map(|x| a.left_slice(x)).collect();
        let f = |s: usize, y: &[f64]| ls[s].mul_vec(y).into_iter().map(|v| -v).collect();
        z = rk4_step(&f, &z, dt);
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("transported vector"));
        }
        zs.push(z.clone());
    }
    out.transported = Some(zs);
    Ok(out)
}

/// Matrix whose columns are the transports of the 𝔪-basis to the end of
/// `base`, in the end frame.
pub fn transport_matrix(alpha: &AlphaMap, base: &Trajectory) -> Result<Mat> {
    let n = alpha.dim();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        let t = parallel_transport(alpha, base, &e)?;
        cols.push(
            t.transported
                .and_then(|z| z.last().cloned())
                .ok_or(Error::EmptyTrajectory)?,
        );
    }
    Mat::from_columns(&cols)
}

/// Holonomy of a closed base curve in the initial frame: `Ad_k|_𝔪 · P` with
/// `k = g(t0)⁻¹ g(t1) ∈ H` and `P` the transport matrix. The second value is
/// how far `Ad_k` is from preserving 𝔪 (nonzero when the curve is not
/// closed).
pub fn holonomy(alpha: &AlphaMap, base: &Trajectory) -> Result<(Mat, f64)> {
    let first = base.frames.first().ok_or(Error::EmptyTrajectory)?;
    let last = base.frames.last().ok_or(Error::EmptyTrajectory)?;
    let k = GroupElement::new(first.matrix().inverse()?.matmul(last.matrix()))?;
    let (ad, leak) = alpha.decomposition().isotropy_on_m(&k)?;
    let p = transport_matrix(alpha, base)?;
    Ok((ad.matmul(&p), leak))
}

/// `max |⟨z_a(t), z_b(t)⟩ − ⟨z_a(t0), z_b(t0)⟩|` over all seed pairs
/// (including each seed with itself) and all samples.
pub fn gram_drift(metric: &MetricOnM, seeds: &[&[Vec<f64>]]) -> f64 {
    let mut worst = 0.0f64;
    for a in 0..seeds.len() {
        for b in a..seeds.len() {
            let (za, zb) = (seeds[a], seeds[b]);
            if za.is_empty() || zb.is_empty() {
                continue;
            }
            let initial = metric.inner(&za[0], &zb[0]);
            for (x, y) in za.iter().zip(zb) {
                worst = worst.max(libm::fabs(metric.inner(x, y) - initial));
            }
        }
    }
    worst
}

/// Euler–Arnold vector field `x ↦ (pr_𝔪 ∘ ad_x)* x` of an invariant metric.
#[derive(Clone, Debug)]
pub struct EulerArnold {
    dec: Arc<ReductiveDecomposition>,
    metric: MetricOnM,
}

impl EulerArnold {
    pub fn new(dec: Arc<ReductiveDecomposition>, metric: MetricOnM) -> Result<Self> {
        if metric.dim() != dec.m_dim() {
            return Err(Error::DimensionMismatch {
                expected: dec.m_dim(),
                found: metric.dim(),
            });
        }
        let rep = dec.check_metric_invariance(&metric);
        if !rep.pass {
            return Err(Error::MetricNotInvariant {
                residual: rep.max_residual,
            });
        }
        Ok(Self { dec, metric })
    }

    pub fn metric(&self) -> &MetricOnM {
        &self.metric
    }

    /// `G⁻¹ Mᵀ G x` with `M` the matrix of `Y ↦ [x,Y]_𝔪`.
    pub fn field(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.dec.check_m_len(x)?;
        let m = self.dec.m_bracket_table().left_slice(x);
        let gx = self.metric.gram().mul_vec(x);
        Ok(self.metric.inverse().mul_vec(&m.tr_mul_vec(&gx)))
    }

    /// Geodesic of the Levi-Civita connection driven by the field.
    pub fn flow(
        &self,
        g0: &GroupElement,
        x0: &[f64],
        t0: f64,
        t1: f64,
        step: f64,
        opts: IntegratorOptions,
    ) -> Result<Trajectory> {
        let mut t = integrate_frame_and_velocity(&self.dec, g0, x0, t0, t1, step, opts, |x| {
            self.field(x).expect("length checked")
        })?;
        t.meta.alpha_label = Some("euler_arnold".into());
        Ok(t)
    }
}

/// A problem with a fixed-step solution and a reference to compare with.
pub trait ConvergenceProblem {
    /// Final state at the given step.
    fn solve(&self, step: f64) -> Result<Vec<f64>>;

    /// Reference final state; defaults to the smallest step divided by 100.
    fn reference(&self, steps: &[f64]) -> Result<Vec<f64>> {
        let h = steps.iter().copied().fold(f64::INFINITY, f64::min);
        self.solve(h / 100.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
    /// Least-squares slope of `log error` against `log step`.
    pub order: Option<f64>,
    /// All errors at rounding level; no order is meaningful.
    pub exact: bool,
}

pub fn convergence_probe(problem: &dyn ConvergenceProblem, steps: &[f64]) -> Result<ConvergenceReport> {
    if steps.len() < 3 {
        return Err(Error::TooFewSteps(steps.len()));
    }
    if let Some(&bad) = steps.iter().find(|h| !(**h > 0.0) || !h.is_finite()) {
        return Err(Error::InvalidStep(bad));
    }
    let reference = problem.reference(steps)?;
    let mut errors = Vec::with_capacity(steps.len());
    for &h in steps {
        errors.push(linalg::max_abs_diff(&problem.solve(h)?, &reference));
    }
    let pts: Vec<(f64, f64)> = steps
        .iter()
        .zip(&errors)
        .filter(|(_, e)| **e > EXACT_FLOOR)
        .map(|(h, e)| (libm::log(*h), libm::log(*e)))
        .collect();
    let exact = pts.is_empty();
    let order = (pts.len() >= 2).then(|| {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        sxy / sxx
    });
    Ok(ConvergenceReport {
        steps: steps.to_vec(),
        errors,
        order,
        exact,
    })
}

fn final_state(t: &Trajectory) -> Vec<f64> {
    let mut s = t
        .frames
        .last()
        .map(|g| g.matrix().as_slice().to_vec())
        .unwrap_or_default();
    s.extend(t.velocities.last().cloned().unwrap_or_default());
    s
}

/// Geodesic from `(g0, x0)` over `[t0, t1]`; final frame and velocity.
#[derive(Clone, Debug)]
pub struct GeodesicProblem {
    pub alpha: AlphaMap,
    pub g0: GroupElement,
    pub x0: Vec<f64>,
    pub t0: f64,
    pub t1: f64,
    /// Compare with `g0·exp((t1 − t0)x0)`, `x ≡ x0`; valid when
    /// `α(x0, x0) = 0`.
    pub closed_form: bool,
}

impl ConvergenceProblem for GeodesicProblem {
    fn solve(&self, step: f64) -> Result<Vec<f64>> {
        let t = geodesic(
            &self.alpha,
            &self.g0,
            &self.x0,
            self.t0,
            self.t1,
            step,
            IntegratorOptions::default(),
        )?;
        Ok(final_state(&t))
    }

    fn reference(&self, steps: &[f64]) -> Result<Vec<f64>> {
        if !self.closed_form {
            let h = steps.iter().copied().fold(f64::INFINITY, f64::min);
            return self.solve(h / 100.0);
        }
        let m = self.alpha.decomposition().m_matrix(&self.x0)?;
        let g = self
            .g0
            .matrix()
            .matmul(&linalg::expm(&m.scale(self.t1 - self.t0)));
        let mut s = g.into_vec();
        s.extend_from_slice(&self.x0);
        Ok(s)
    }
}

/// Transport of `z0` along a geodesic started at `(g0, x0)`; the state
/// compared is the final transported vector.
#[derive(Clone, Debug)]
pub struct TransportProblem {
    pub alpha: AlphaMap,
    pub g0: GroupElement,
    pub x0: Vec<f64>,
    pub z0: Vec<f64>,
    pub t0: f64,
    pub t1: f64,
}

impl ConvergenceProblem for TransportProblem {
    fn solve(&self, step: f64) -> Result<Vec<f64>> {
        let base = geodesic(
            &self.alpha,
            &self.g0,
            &self.x0,
            self.t0,
            self.t1,
            step,
            IntegratorOptions::default(),
        )?;
        let z = parallel_transport(&self.alpha, &base, &self.z0)?.transported;
        Ok(z.and_then(|mut z| z.pop()).unwrap_or_default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraVector;
    use crate::catalog;
    use core::f64::consts::PI;

    fn rigid(inertia: [f64; 3]) -> (Arc<ReductiveDecomposition>, MetricOnM) {
        let b = catalog::group_as_space(
            Arc::new(catalog::so3()),
            Some(MetricOnM::new(Mat::diag(&inertia)).unwrap()),
        )
        .unwrap();
        (b.dec.clone(), b.metric.clone().unwrap())
    }

    #[test]
    fn grid_is_uniform_and_hits_the_end() {
        let (t, h) = uniform_grid(0.0, 1.0, 0.3).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(h, 0.25);
        assert_eq!(*t.last().unwrap(), 1.0);
        let (t, _) = uniform_grid(0.0, 10.0, 1e-3).unwrap();
        assert_eq!(t.len(), 10_001);
        assert!(matches!(uniform_grid(0.0, 1.0, 0.0), Err(Error::InvalidStep(_))));
        assert!(matches!(uniform_grid(1.0, 1.0, 0.1), Err(Error::EmptySpan)));
    }

    #[test]
    fn zero_alpha_keeps_velocity_exactly() {
        let s = catalog::sphere2();
        let a = AlphaMap::canonical_second(s.dec.clone());
        let x0 = [0.3, -1.2];
        let t = geodesic(
            &a,
            &GroupElement::identity(3),
            &x0,
            0.0,
            2.0,
            0.01,
            Default::default(),
        )
        .unwrap();
        assert!(t.velocities.iter().all(|x| x == &x0));
        assert_eq!(t.meta.horizontality_leak, 0.0);
        assert_eq!(t.meta.alpha_label.as_deref(), Some("canonical_second"));
    }

    #[test]
    fn geodesic_matches_exponential() {
        let s = catalog::sphere2();
        let a = AlphaMap::canonical_first(s.dec.clone());
        let x0 = [1.0, 0.0];
        let t = geodesic(
            &a,
            &GroupElement::identity(3),
            &x0,
            0.0,
            1.5,
            1e-3,
            Default::default(),
        )
        .unwrap();
        let exact = s
            .algebra
            .group_exp(&AlgebraVector::new(vec![1.0, 0.0, 0.0]), 1.5)
            .unwrap();
        assert!(t.last_frame().unwrap().matrix().sub(exact.matrix()).max_abs() < 1e-12);
        assert!(t.meta.max_group_drift.unwrap() < 1e-12);
    }

    #[test]
    fn reprojection_caps_drift() {
        let s = catalog::sphere2();
        let a = AlphaMap::canonical_first(s.dec.clone());
        let opts = IntegratorOptions { reproject: true };
        let t = geodesic(&a, &GroupElement::identity(3), &[1.0, 0.5], 0.0, 20.0, 0.2, opts).unwrap();
        assert!(t.meta.reprojected);
        assert!(t.meta.max_group_drift.unwrap() < 1e-12);
        let plain = geodesic(
            &a,
            &GroupElement::identity(3),
            &[1.0, 0.5],
            0.0,
            20.0,
            0.2,
            Default::default(),
        )
        .unwrap();
        assert!(plain.meta.max_group_drift.unwrap() > 1e-10);
    }

    #[test]
    fn blow_up_returns_partial_trajectory() {
        // α(x,x) = −x² on a one-dimensional 𝔪 gives ẋ = x², which blows up
        // at t = 1 from x0 = 1.
        let dec =
            Arc::new(ReductiveDecomposition::trivial_isotropy(Arc::new(catalog::so_n(2).unwrap())).unwrap());
        let mut c = crate::linalg::Tensor3::zeros(1);
        c.set(0, 0, 0, -1.0);
        let a = AlphaMap::explicit(dec, c).unwrap();
        match geodesic(
            &a,
            &GroupElement::identity(2),
            &[1.0],
            0.0,
            2.0,
            1e-3,
            Default::default(),
        ) {
            Err(Error::BlowUp { time, partial, .. }) => {
                assert!(time > 0.99 && time < 1.01, "{time}");
                assert!(!partial.is_empty());
                assert!(partial.times.last().unwrap() < &time);
            }
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn lift_of_horizontal_curve_is_itself() {
        let s = catalog::sphere2();
        let times: Vec<f64> = (0..=200).map(|i| i as f64 * 0.01).collect();
        let x = AlgebraVector::new(vec![0.6, -0.8, 0.0]);
        let samples: Vec<GroupElement> = times
            .iter()
            .map(|&t| s.algebra.group_exp(&x, t).unwrap())
            .collect();
        let lift = horizontal_lift(&s.dec, &times, &samples, None).unwrap();
        for (g, c) in lift.frames.iter().zip(&samples) {
            assert!(g.matrix().sub(c.matrix()).max_abs() < 1e-9);
        }
        for v in &lift.velocities {
            assert!(linalg::max_abs_diff(v, &[0.6, -0.8]) < 1e-8);
        }
        assert!(lift.meta.horizontality_leak < HORIZONTALITY_TOL);
        assert!(lift.meta.warnings.is_empty());
    }

    #[test]
    fn lift_of_vertical_curve_is_constant() {
        let s = catalog::sphere2();
        let times: Vec<f64> = (0..=400).map(|i| i as f64 * 0.005).collect();
        let eta = AlgebraVector::basis(3, 2);
        let samples: Vec<GroupElement> = times
            .iter()
            .map(|&t| s.algebra.group_exp(&eta, t).unwrap())
            .collect();
        let lift = horizontal_lift(&s.dec, &times, &samples, None).unwrap();
        for g in &lift.frames {
            assert!(g.matrix().sub(&Mat::identity(3)).max_abs() < 1e-9);
        }
        assert!(lift.velocities.iter().all(|v| linalg::norm_inf(v) < 1e-9));
    }

    #[test]
    fn coarse_samples_warn() {
        let s = catalog::sphere2();
        let times: Vec<f64> = (0..=6).map(|i| i as f64).collect();
        let x = AlgebraVector::new(vec![1.0, 0.0, 1.0]);
        let samples: Vec<GroupElement> = times
            .iter()
            .map(|&t| s.algebra.group_exp(&x, t).unwrap())
            .collect();
        let lift = horizontal_lift(&s.dec, &times, &samples, None).unwrap();
        assert!(!lift.meta.warnings.is_empty());
        assert!(matches!(
            horizontal_lift(&s.dec, &times[..2], &samples[..2], None),
            Err(Error::TooFewSamples { .. })
        ));
        let mut back = times.clone();
        back[3] = back[2];
        assert!(matches!(
            horizontal_lift(&s.dec, &back, &samples, None),
            Err(Error::NotIncreasing { index: 3 })
        ));
    }

    #[test]
    fn canonical_first_transport_closed_form() {
        let (dec, _) = rigid([1.0, 1.0, 1.0]);
        let a = AlphaMap::canonical_first(dec.clone());
        let x = vec![0.4, -0.2, 0.9];
        let base = base_trajectory(
            &dec,
            &CurveSpec::OneParameter(x.clone()),
            None,
            Some((0.0, 3.0)),
            1e-2,
            Default::default(),
        )
        .unwrap();
        let z0 = [1.0, 2.0, -0.5];
        let t = parallel_transport(&a, &base, &z0).unwrap();
        let ad = dec.m_bracket_table().left_slice(&x);
        let closed = linalg::expm(&ad.scale(-1.5)).mul_vec(&z0);
        let zt = t.transported.unwrap();
        assert!(linalg::max_abs_diff(zt.last().unwrap(), &closed) < 1e-8);
    }

    #[test]
    fn transport_is_linear() {
        let (dec, metric) = rigid([1.0, 2.0, 3.0]);
        let lc = AlphaMap::levi_civita(dec, &metric).unwrap();
        let base = geodesic(
            &lc,
            &GroupElement::identity(3),
            &[0.5, 0.2, -0.7],
            0.0,
            3.0,
            1e-2,
            Default::default(),
        )
        .unwrap();
        let (u, v) = ([1.0, 0.0, 2.0], [-0.3, 1.1, 0.4]);
        let w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| 2.0 * a - 3.0 * b).collect();
        let end = |z: &[f64]| {
            parallel_transport(&lc, &base, z)
                .unwrap()
                .transported
                .unwrap()
                .pop()
                .unwrap()
        };
        let (zu, zv, zw) = (end(&u), end(&v), end(&w));
        for k in 0..3 {
            assert!((zw[k] - (2.0 * zu[k] - 3.0 * zv[k])).abs() < 1e-10);
        }
    }

    #[test]
    fn euler_arnold_field_examples() {
        let (dec, metric) = rigid([1.0, 2.0, 3.0]);
        let ea = EulerArnold::new(dec.clone(), metric.clone()).unwrap();
        let x = [0.7, -0.1, 0.4];
        let f = ea.field(&x).unwrap();
        let i = [1.0, 2.0, 3.0];
        let ix = [x[0] * i[0], x[1] * i[1], x[2] * i[2]];
        let c = [
            ix[1] * x[2] - ix[2] * x[1],
            ix[2] * x[0] - ix[0] * x[2],
            ix[0] * x[1] - ix[1] * x[0],
        ];
        for k in 0..3 {
            assert!((f[k] - c[k] / i[k]).abs() < 1e-14);
        }
        let lc = AlphaMap::levi_civita(dec.clone(), &metric).unwrap();
        let a = lc.eval(&x, &x).unwrap();
        assert!(linalg::max_abs_diff(&f, &a.iter().map(|v| -v).collect::<Vec<_>>()) < EULER_ARNOLD_TOL);
        assert!(metric.inner(&f, &x).abs() < 1e-14);
        let bi = EulerArnold::new(dec, MetricOnM::identity(3)).unwrap();
        assert!(linalg::norm_inf(&bi.field(&x).unwrap()) < 1e-16);
    }

    #[test]
    fn holonomy_of_sphere_latitude() {
        let s = catalog::sphere2();
        let lc = AlphaMap::levi_civita(s.dec.clone(), s.metric.as_ref().unwrap()).unwrap();
        let theta = PI / 3.0;
        let n = 2000;
        let times: Vec<f64> = (0..=n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        let ry = s.algebra.group_exp(&AlgebraVector::basis(3, 1), theta).unwrap();
        let samples: Vec<GroupElement> = times
            .iter()
            .map(|&t| {
                s.algebra
                    .group_exp(&AlgebraVector::basis(3, 2), t)
                    .unwrap()
                    .compose(&ry)
            })
            .collect();
        let lift = horizontal_lift(&s.dec, &times, &samples, None).unwrap();
        let (hol, leak) = holonomy(&lc, &lift).unwrap();
        assert!(leak < 1e-8);
        let angle = libm::atan2(hol[(1, 0)], hol[(0, 0)]).abs();
        assert!((angle - 2.0 * PI * (1.0 - theta.cos())).abs() < 1e-6, "{angle}");
    }

    #[test]
    fn convergence_probe_orders() {
        let s = catalog::sphere2();
        let a = AlphaMap::canonical_first(s.dec.clone());
        let p = GeodesicProblem {
            alpha: a,
            g0: GroupElement::identity(3),
            x0: vec![1.0, 0.3],
            t0: 0.0,
            t1: 2.0,
            closed_form: true,
        };
        let r = convergence_probe(&p, &[0.2, 0.1, 0.05, 0.025]).unwrap();
        let order = r.order.unwrap();
        assert!((3.7..=4.3).contains(&order), "{order}");
        let zero = TransportProblem {
            alpha: AlphaMap::canonical_second(s.dec.clone()),
            g0: GroupElement::identity(3),
            x0: vec![0.4, 1.3],
            z0: vec![1.0, -1.0],
            t0: 0.0,
            t1: 1.0,
        };
        assert!(convergence_probe(&zero, &[0.2, 0.1, 0.05]).unwrap().exact);
        assert!(matches!(
            convergence_probe(&p, &[0.1, 0.05]),
            Err(Error::TooFewSteps(2))
        ));
    }

    #[test]
    fn piecewise_velocity_constant_matches_exp() {
        let s = catalog::sphere2();
        let x = vec![0.2, 0.9];
        let curve = CurveSpec::PiecewiseVelocity {
            times: vec![0.0, 1.0, 2.0],
            velocities: vec![x.clone(); 3],
        };
        let base = base_trajectory(&s.dec, &curve, None, None, 1e-2, Default::default()).unwrap();
        let exact = s
            .algebra
            .group_exp(&s.dec.from_m_coords(&x).unwrap(), 2.0)
            .unwrap();
        assert!(base.last_frame().unwrap().matrix().sub(exact.matrix()).max_abs() < 1e-9);
        assert_eq!(base.velocities.len(), base.times.len());
    }

    #[test]
    fn gram_drift_of_constant_vectors_is_zero() {
        let z = vec![vec![1.0, 2.0]; 5];
        let w = vec![vec![0.5, -1.0]; 5];
        assert_eq!(gram_drift(&MetricOnM::identity(2), &[&z, &w]), 0.0);
    }
}
