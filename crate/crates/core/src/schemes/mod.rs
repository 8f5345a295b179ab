//! Spatial discretizations of the advection term `v . grad(phi)`.

mod semi_lagrangian;
mod weno;

use std::fmt;
use std::str::FromStr;

pub use semi_lagrangian::semi_lagrangian_advect;
pub use weno::{weno5_biased, weno_cu6_biased};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Upwind1,
    Weno5,
    WenoCu6,
    SemiLagrangian,
}

impl SchemeKind {
    /// Stencil half-width of the cross-shaped derivative stencil.
    pub fn half_width(self) -> usize {
        match self {
            SchemeKind::Upwind1 => 1,
            SchemeKind::Weno5 | SchemeKind::WenoCu6 => 3,
            SchemeKind::SemiLagrangian => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Upwind1 => "upwind1",
            SchemeKind::Weno5 => "weno5",
            SchemeKind::WenoCu6 => "wenocu6",
            SchemeKind::SemiLagrangian => "sl",
        }
    }

    pub const ALL: [SchemeKind; 4] =
        [SchemeKind::Upwind1, SchemeKind::Weno5, SchemeKind::WenoCu6, SchemeKind::SemiLagrangian];
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown scheme `{s}` (expected upwind1, weno5, wenocu6 or sl)"))
    }
}

/// Left- and right-biased derivatives along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedDerivatives {
    pub minus: f64,
    pub plus: f64,
}

/// One-sided derivatives at the middle of `phi = phi_{i-3} .. phi_{i+3}`.
///
/// The semi-Lagrangian scheme has no derivative stencil; it falls back to
/// first-order differences here.
#[inline]
pub fn one_sided(scheme: SchemeKind, phi: &[f64; 7], h: f64) -> OneSidedDerivatives {
    match scheme {
        SchemeKind::Upwind1 | SchemeKind::SemiLagrangian => OneSidedDerivatives {
            minus: (phi[3] - phi[2]) / h,
            plus: (phi[4] - phi[3]) / h,
        },
        SchemeKind::Weno5 => {
            let m = [phi[0], phi[1], phi[2], phi[3], phi[4], phi[5]];
            let p = [phi[6], phi[5], phi[4], phi[3], phi[2], phi[1]];
            OneSidedDerivatives { minus: weno5_biased(&m, h), plus: -weno5_biased(&p, h) }
        }
        SchemeKind::WenoCu6 => {
            let mut r = *phi;
            r.reverse();
            OneSidedDerivatives { minus: weno_cu6_biased(phi, h), plus: -weno_cu6_biased(&r, h) }
        }
    }
}

/// Component-wise upwinded `v . grad(phi)` from the two axis stencils.
#[inline]
pub fn hj_upwind_gradient(
    sx: &[f64; 7],
    sy: &[f64; 7],
    v: [f64; 2],
    scheme: SchemeKind,
    h: f64,
) -> f64 {
    let mut out = 0.0;
    for (s, vel) in [(sx, v[0]), (sy, v[1])] {
        if vel > 0.0 {
            out += vel * one_sided(scheme, s, h).minus;
        } else if vel < 0.0 {
            out += vel * one_sided(scheme, s, h).plus;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(f: impl Fn(f64) -> f64, x: f64, h: f64) -> [f64; 7] {
        std::array::from_fn(|k| f(x + (k as f64 - 3.0) * h))
    }

    #[test]
    fn parse_and_widths() {
        assert_eq!("weno5".parse::<SchemeKind>().unwrap(), SchemeKind::Weno5);
        assert_eq!("SL".parse::<SchemeKind>().unwrap(), SchemeKind::SemiLagrangian);
        assert!("weno7".parse::<SchemeKind>().is_err());
        let w: Vec<usize> = SchemeKind::ALL.iter().map(|k| k.half_width()).collect();
        assert_eq!(w, vec![1, 3, 3, 0]);
    }

    #[test]
    fn linear_exactness_all_schemes() {
        let h = 1.0 / 64.0;
        for k in SchemeKind::ALL {
            let d = one_sided(k, &axis(|x| 3.0 * x - 0.2, 0.4, h), h);
            assert!((d.minus - 3.0).abs() < 1e-11 && (d.plus - 3.0).abs() < 1e-11, "{k}");
        }
    }

    #[test]
    fn upwinded_gradient_examples() {
        let h = 1.0 / 64.0;
        let sx = axis(|x| x, 0.5, h);
        let sy = axis(|_| 0.0, 0.5, h);
        assert!((hj_upwind_gradient(&sx, &sy, [1.0, 0.0], SchemeKind::Weno5, h) - 1.0).abs() < 1e-12);
        assert_eq!(hj_upwind_gradient(&sx, &sy, [0.0, 0.0], SchemeKind::Weno5, h), 0.0);
        // phi = x^2 + y^2 at (0.5, 0.5)
        let sx = axis(|x| x * x + 0.25, 0.5, h);
        let sy = axis(|y| 0.25 + y * y, 0.5, h);
        let g = hj_upwind_gradient(&sx, &sy, [1.0, 1.0], SchemeKind::Weno5, h);
        assert!((g - 2.0).abs() < 1e-8, "{g}");
    }

    #[test]
    fn one_sided_consistency() {
        for k in [SchemeKind::Weno5, SchemeKind::WenoCu6] {
            let mut prev = f64::INFINITY;
            for n in [32.0, 64.0, 128.0] {
                let h = 1.0 / n;
                let d = one_sided(k, &axis(|x| (3.0 * x).sin(), 0.41, h), h);
                let gap = (d.plus - d.minus).abs();
                assert!(gap <= prev);
                prev = gap;
            }
        }
    }

    #[test]
    fn cu6_close_to_weno5_on_smooth_data() {
        let h = 1.0 / 128.0;
        let s = axis(|x| (2.0 * x).cos(), 0.3, h);
        let a = one_sided(SchemeKind::Weno5, &s, h);
        let b = one_sided(SchemeKind::WenoCu6, &s, h);
        assert!((a.minus - b.minus).abs() < 1e-8 && (a.plus - b.plus).abs() < 1e-8);
    }
}
