//! Weights on the upper half-plane, including the two-factor power forms
//! whose conjugate-exponent weights stay symbolic.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{LabError, Result};

/// A weight on the upper half-plane.
///
/// `PowerForm` is `exp(log_const) |zeta|^{s_origin} |i+zeta|^{s_shift}`; its
/// conjugate-exponent weight `mu^{1/(1-p)}` is formed by exponent arithmetic,
/// which both avoids extreme pointwise powers and enables the analytic
/// divergence fast path at the origin.
#[derive(Clone)]
pub enum HalfPlaneWeight {
    PowerForm {
        s_origin: f64,
        s_shift: f64,
        log_const: f64,
    },
    /// `mu = |F|^{exponent}` for a holomorphic non-vanishing `F`.
    HoloF {
        f: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
        exponent: f64,
    },
    Direct {
        mu: Arc<dyn Fn(Complex64) -> f64 + Send + Sync>,
    },
}

impl std::fmt::Debug for HalfPlaneWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HalfPlaneWeight({})", self.id())
    }
}

impl HalfPlaneWeight {
    pub fn constant_one() -> Self {
        HalfPlaneWeight::PowerForm {
            s_origin: 0.0,
            s_shift: 0.0,
            log_const: 0.0,
        }
    }

    pub fn power_form(s_origin: f64, s_shift: f64) -> Self {
        HalfPlaneWeight::PowerForm {
            s_origin,
            s_shift,
            log_const: 0.0,
        }
    }

    /// `mu = |F|^{2-p}`.
    pub fn from_holomorphic<F>(f: F, p: f64) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        HalfPlaneWeight::HoloF {
            f: Arc::new(f),
            exponent: 2.0 - p,
        }
    }

    pub fn direct<F>(mu: F) -> Self
    where
        F: Fn(Complex64) -> f64 + Send + Sync + 'static,
    {
        HalfPlaneWeight::Direct { mu: Arc::new(mu) }
    }

    pub fn id(&self) -> String {
        match self {
            HalfPlaneWeight::PowerForm {
                s_origin, s_shift, ..
            } => {
                if *s_origin == 0.0 && *s_shift == 0.0 {
                    "one".to_string()
                } else {
                    format!("power_form:s_origin={s_origin},s_shift={s_shift}")
                }
            }
            HalfPlaneWeight::HoloF { exponent, .. } => format!("holo_f:exponent={exponent}"),
            HalfPlaneWeight::Direct { .. } => "direct".to_string(),
        }
    }

    pub fn eval(&self, zeta: Complex64) -> f64 {
        match self {
            HalfPlaneWeight::PowerForm {
                s_origin,
                s_shift,
                log_const,
            } => {
                let mut log = *log_const;
                if *s_origin != 0.0 {
                    log += s_origin * zeta.norm().ln();
                }
                if *s_shift != 0.0 {
                    log += s_shift * (zeta + Complex64::new(0.0, 1.0)).norm().ln();
                }
                log.exp()
            }
            HalfPlaneWeight::HoloF { f, exponent } => f(zeta).norm().powf(*exponent),
            HalfPlaneWeight::Direct { mu } => mu(zeta),
        }
    }

    /// The conjugate-exponent weight `mu^{1/(1-p)}` entering the A_p^+
    /// quantity; symbolic for power forms, pointwise otherwise.
    pub fn conjugate_exponent(&self, p: f64) -> Result<HalfPlaneWeight> {
        if !(p > 1.0) {
            return Err(LabError::InvalidInput(format!("need p > 1, got {p}")));
        }
        let q = 1.0 / (1.0 - p);
        Ok(match self {
            HalfPlaneWeight::PowerForm {
                s_origin,
                s_shift,
                log_const,
            } => HalfPlaneWeight::PowerForm {
                s_origin: s_origin * q,
                s_shift: s_shift * q,
                log_const: log_const * q,
            },
            HalfPlaneWeight::HoloF { f, exponent } => HalfPlaneWeight::HoloF {
                f: f.clone(),
                exponent: exponent * q,
            },
            HalfPlaneWeight::Direct { mu } => {
                let mu = mu.clone();
                HalfPlaneWeight::Direct {
                    mu: Arc::new(move |z| mu(z).powf(q)),
                }
            }
        })
    }

    /// The exponent of the `|zeta|` factor at the origin, when known
    /// symbolically. Drives the analytic divergence fast path.
    pub fn origin_exponent(&self) -> Option<f64> {
        match self {
            HalfPlaneWeight::PowerForm { s_origin, .. } => Some(*s_origin),
            _ => None,
        }
    }
}

/// A holomorphic non-vanishing `F` on the upper half-plane together with the
/// symbolic form of its A_p test weights `|F|^{2-p}` when available.
#[derive(Clone)]
pub struct HalfPlaneF {
    f: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    kind: FKind,
}

#[derive(Clone, Debug)]
enum FKind {
    /// `F(zeta) = zeta^{2/(p0-2)}`
    ZetaPow { p0: f64 },
    /// `F(zeta) = -2i/(i+zeta)^2 (-2 zeta/(i+zeta))^{2/(p0-2)}`
    Remark { p0: f64 },
    General,
}

impl std::fmt::Debug for HalfPlaneF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HalfPlaneF({:?})", self.kind)
    }
}

impl HalfPlaneF {
    pub fn general<F>(f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        HalfPlaneF {
            f: Arc::new(f),
            kind: FKind::General,
        }
    }

    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        (self.f)(zeta)
    }

    pub fn closure(&self) -> Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync> {
        self.f.clone()
    }

    pub fn id(&self) -> String {
        match &self.kind {
            FKind::ZetaPow { p0 } => format!("zeta_pow:p0={p0}"),
            FKind::Remark { p0 } => format!("remark35:p0={p0}"),
            FKind::General => "general".to_string(),
        }
    }

    /// The A_p test weight `|F|^{2-p}`, symbolic for the named families.
    pub fn ap_weight(&self, p: f64) -> HalfPlaneWeight {
        match &self.kind {
            FKind::ZetaPow { p0 } => {
                let q = 2.0 / (p0 - 2.0);
                HalfPlaneWeight::PowerForm {
                    s_origin: q * (2.0 - p),
                    s_shift: 0.0,
                    log_const: 0.0,
                }
            }
            FKind::Remark { p0 } => {
                let q = 2.0 / (p0 - 2.0);
                HalfPlaneWeight::PowerForm {
                    // |F| = 2^{1+q} |zeta|^q |i+zeta|^{-2-q}
                    s_origin: q * (2.0 - p),
                    s_shift: (-2.0 - q) * (2.0 - p),
                    log_const: (1.0 + q) * (2.0 - p) * 2.0f64.ln(),
                }
            }
            FKind::General => {
                let f = self.f.clone();
                HalfPlaneWeight::HoloF {
                    f,
                    exponent: 2.0 - p,
                }
            }
        }
    }
}

/// `F(zeta) = zeta^{2/(p0-2)}` (principal branch; the upper half-plane
/// avoids the cut).
pub fn zeta_power_f(p0: f64) -> Result<HalfPlaneF> {
    if !(p0 > 2.0) {
        return Err(LabError::InvalidInput(format!("need p0 > 2, got {p0}")));
    }
    let e = 2.0 / (p0 - 2.0);
    Ok(HalfPlaneF {
        f: Arc::new(move |zeta: Complex64| zeta.powf(e)),
        kind: FKind::ZetaPow { p0 },
    })
}

/// `F(zeta) = -2i/(i+zeta)^2 (-2 zeta/(i+zeta))^{2/(p0-2)}`, whose transported
/// disc weight is the bounded `|z-1|^{4/(p0-2)}`.
pub fn remark_f(p0: f64) -> Result<HalfPlaneF> {
    if !(p0 > 2.0) {
        return Err(LabError::InvalidInput(format!("need p0 > 2, got {p0}")));
    }
    let e = 2.0 / (p0 - 2.0);
    let i = Complex64::new(0.0, 1.0);
    Ok(HalfPlaneF {
        f: Arc::new(move |zeta: Complex64| {
            let d = i + zeta;
            (-2.0 * i) / (d * d) * ((-2.0 * zeta) / d).powf(e)
        }),
        kind: FKind::Remark { p0 },
    })
}
