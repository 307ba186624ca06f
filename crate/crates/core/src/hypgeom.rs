//! Hyperbolic-plane geometry in the Poincaré disk model.
//!
//! Internal coordinates are always disk-model (bounded, uniform precision
//! behavior); half-plane input is converted on ingest by the Cayley map
//! `z -> (z - i)/(z + i)`, with matrices conjugated accordingly. Möbius
//! action, distance, isometry classification, translation length and
//! pointwise displacement all propagate error bounds from `numcore`.

use crate::numcore::{GroupElement, NumError, PrecComplex, PrecScalar};
use crate::scalar::Real;

/// Point strictly inside the unit disk.
#[derive(Debug, Clone, Copy)]
pub struct HPoint<T: Real> {
    pub z: PrecComplex<T>,
}

impl<T: Real> HPoint<T> {
    pub fn origin() -> Self {
        HPoint { z: PrecComplex::zero() }
    }

    /// Disk-model point; rejects points not provably interior.
    pub fn from_disk(re: T, im: T) -> Result<Self, NumError> {
        let z = PrecComplex::exact(re, im);
        let p = HPoint { z };
        p.check_interior()?;
        Ok(p)
    }

    /// Half-plane point (Im > 0), converted by the Cayley map
    /// `w = (z - i)/(z + i)`.
    pub fn from_halfplane(re: T, im: T) -> Result<Self, NumError> {
        let z = PrecComplex::exact(re, im);
        let i = PrecComplex::exact(T::zero(), T::one());
        let w = z.sub(i).div(z.add(i))?;
        let p = HPoint { z: w };
        p.check_interior()?;
        Ok(p)
    }

    /// Back to the half-plane: `z = i (1 + w)/(1 - w)`.
    pub fn to_halfplane(&self) -> Result<(T, T), NumError> {
        let one = PrecComplex::<T>::one();
        let i = PrecComplex::exact(T::zero(), T::one());
        let z = i.mul(one.add(self.z)).div(one.sub(self.z))?;
        Ok((z.re.value, z.im.value))
    }

    pub fn check_interior(&self) -> Result<(), NumError> {
        let n = self.z.norm_sqr();
        if n.value + n.errbound >= T::one() {
            return Err(NumError::PrecisionExhausted {
                errbound: n.errbound.to_f64(),
                budget: (T::one() - n.value).to_f64(),
            });
        }
        Ok(())
    }
}

/// Isometry type of a unit-determinant element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// Conjugate a half-plane matrix into the disk model:
/// `M_disk = C M C^{-1}` with `C = [[1, -i], [1, i]]` (the scalar factor
/// of the Cayley matrix cancels in the conjugation, so det is preserved).
pub fn halfplane_to_disk<T: Real>(g: &GroupElement<T>) -> GroupElement<T> {
    let i = PrecComplex::exact(T::zero(), T::one());
    let half = PrecScalar::exact(T::from_f64(0.5).unwrap());
    let half_c = PrecComplex::new(half, PrecScalar::exact(T::zero()));
    let c = [
        PrecComplex::<T>::one(),
        i.neg(),
        PrecComplex::<T>::one(),
        i,
    ];
    // C^{-1} = (1/(2 det-free)) [[i, i], [-1, 1]] / i = (1/2) [[1, 1], [i, -i]]
    let cinv = [
        half_c,
        half_c,
        i.mul(half_c),
        i.neg().mul(half_c),
    ];
    let mul4 = |a: &[PrecComplex<T>; 4], b: &[PrecComplex<T>; 4]| -> [PrecComplex<T>; 4] {
        [
            a[0].mul(b[0]).add(a[1].mul(b[2])),
            a[0].mul(b[1]).add(a[1].mul(b[3])),
            a[2].mul(b[0]).add(a[3].mul(b[2])),
            a[2].mul(b[1]).add(a[3].mul(b[3])),
        ]
    };
    let m = mul4(&mul4(&c, &g.entries), &cinv);
    GroupElement::from_entries(m, g.word.clone())
}

/// Möbius action `z -> (a z + b)/(c z + d)`.
pub fn mobius_act<T: Real>(
    g: &GroupElement<T>,
    z: &HPoint<T>,
) -> Result<HPoint<T>, NumError> {
    let num = g.a().mul(z.z).add(g.b());
    let den = g.c().mul(z.z).add(g.d());
    let w = num.div(den)?;
    let p = HPoint { z: w };
    p.check_interior()?;
    Ok(p)
}

/// Geodesic distance in the disk:
/// `cosh d = 1 + 2 |z1 - z2|^2 / ((1 - |z1|^2)(1 - |z2|^2))`.
pub fn hyp_dist<T: Real>(z1: &HPoint<T>, z2: &HPoint<T>) -> Result<PrecScalar<T>, NumError> {
    let one = PrecScalar::exact(T::one());
    let two = PrecScalar::exact(T::from_f64(2.0).unwrap());
    let d2 = z1.z.sub(z2.z).norm_sqr();
    let f1 = one.sub(z1.z.norm_sqr());
    let f2 = one.sub(z2.z.norm_sqr());
    let t = two.mul(d2).div(f1.mul(f2))?; // cosh d - 1, nonnegative
    Ok(acosh1p(t))
}

/// `acosh(1 + t)` for error-tracked nonnegative `t`, by monotone interval
/// evaluation (the derivative blows up at t = 0, so a linearized bound
/// would be unsound there).
pub fn acosh1p<T: Real>(t: PrecScalar<T>) -> PrecScalar<T> {
    let lo = (t.value - t.errbound).max(T::zero());
    let mid = t.value.max(T::zero());
    let hi = t.value + t.errbound;
    let f = |x: T| -> T {
        // acosh(1+x) = ln(1 + x + sqrt(x(2+x))), stable near 0 via ln_1p
        let s = (x * (x + T::from_f64(2.0).unwrap())).sqrt();
        (x + s).ln_1p()
    };
    let v = f(mid);
    let e = (f(hi) - v).max(v - f(lo)) + v.abs() * T::from_f64(T::unit_roundoff()).unwrap();
    PrecScalar::new(v, e * (T::one() + T::from_f64(1e-14).unwrap()))
}

/// Classify by |trace| against 2, refusing to guess when the error bound
/// straddles the boundary.
pub fn classify_element<T: Real>(g: &GroupElement<T>) -> Result<ElementClass, NumError> {
    let t = g.trace_abs();
    let two = T::from_f64(2.0).unwrap();
    if t.value - two > t.errbound {
        return Ok(ElementClass::Hyperbolic);
    }
    if two - t.value > t.errbound {
        return Ok(ElementClass::Elliptic);
    }
    // |tr| = 2 within resolution: identity iff the matrix is ±I
    let dist_to_id = g.entry_dist(&GroupElement::identity());
    let slack = g.errbound().max(T::from_f64(1e-25).unwrap()) * two * two;
    if dist_to_id <= slack {
        return Ok(ElementClass::Identity);
    }
    if t.errbound.is_zero() && t.value == two {
        return Ok(ElementClass::Parabolic);
    }
    Err(NumError::Indeterminate(format!(
        "|trace| = {} within {:e} of 2",
        t.value.to_f64(),
        t.errbound.to_f64()
    )))
}

/// Translation length `2 acosh(|tr|/2)` of a hyperbolic element.
pub fn translation_length<T: Real>(g: &GroupElement<T>) -> Result<PrecScalar<T>, NumError> {
    match classify_element(g)? {
        ElementClass::Hyperbolic => {}
        other => {
            return Err(NumError::NotHyperbolic(format!("{other:?}")));
        }
    }
    let two = PrecScalar::exact(T::from_f64(2.0).unwrap());
    let half_tr = g.trace_abs().div(two)?;
    // acosh(x) = acosh(1 + (x-1))
    let t = half_tr.sub(PrecScalar::exact(T::one()));
    Ok(two.mul(acosh1p(t)))
}

/// `hyp_dist(z, g z)`.
pub fn displacement<T: Real>(
    g: &GroupElement<T>,
    z: &HPoint<T>,
) -> Result<PrecScalar<T>, NumError> {
    let gz = mobius_act(g, z)?;
    hyp_dist(z, &gz)
}

/// Displacement of the origin: `g·0 = b/d`, and
/// `cosh d(0, g·0) = (1 + |w|^2)/(1 - |w|^2)`.
pub fn origin_displacement<T: Real>(g: &GroupElement<T>) -> Result<PrecScalar<T>, NumError> {
    let w = g.b().div(g.d())?;
    let n = w.norm_sqr();
    let one = PrecScalar::exact(T::one());
    let two = PrecScalar::exact(T::from_f64(2.0).unwrap());
    let t = two.mul(n).div(one.sub(n))?;
    Ok(acosh1p(t))
}

// ---------------------------------------------------------------------------
// Dirichlet-domain circumradius bound (plain f64: used only as a certified
// search-radius bound, padded outward).

fn to_hyperboloid(w: (f64, f64)) -> [f64; 3] {
    let n = w.0 * w.0 + w.1 * w.1;
    let d = 1.0 - n;
    [(1.0 + n) / d, 2.0 * w.0 / d, 2.0 * w.1 / d]
}

fn mink(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2]
}

/// Circumradius of the Dirichlet domain at the origin for the isometries
/// whose orbit points `g·0` (disk coordinates) are given. The domain
/// vertices are the points equidistant from the origin and two orbit
/// points; each candidate is kept only if it actually lies in the domain
/// (no orbit point is strictly closer than the origin). Returns the
/// largest vertex distance, padded outward, or `None` if the side pairings
/// do not close up a compact domain.
pub fn dirichlet_circumradius(orbit: &[(f64, f64)]) -> Option<f64> {
    let origin = [1.0, 0.0, 0.0];
    let pts: Vec<[f64; 3]> = orbit.iter().map(|&w| to_hyperboloid(w)).collect();
    let mut rmax: f64 = 0.0;
    let mut found = false;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            // X with <X,O> = <X,Pi> = <X,Pj>: Minkowski-orthogonal to the
            // difference vectors, i.e. G·X = cross(Pi-O, Pj-O)
            let u = [
                pts[i][0] - origin[0],
                pts[i][1] - origin[1],
                pts[i][2] - origin[2],
            ];
            let v = [
                pts[j][0] - origin[0],
                pts[j][1] - origin[1],
                pts[j][2] - origin[2],
            ];
            let c = [
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            ];
            let x = [c[0], -c[1], -c[2]];
            let s = mink(x, x);
            if s <= 1e-14 {
                continue; // lightlike/spacelike: bisectors meet at infinity
            }
            let scale = s.sqrt();
            let mut x = [x[0] / scale, x[1] / scale, x[2] / scale];
            if x[0] < 0.0 {
                x = [-x[0], -x[1], -x[2]];
            }
            let d0 = mink(x, origin);
            // inside the Dirichlet domain: no orbit point strictly closer
            let inside = pts.iter().all(|p| mink(x, *p) >= d0 - 1e-9);
            if inside {
                found = true;
                if d0 > 1.0 {
                    rmax = rmax.max(d0.acosh());
                }
            }
        }
    }
    if found {
        // outward pad: covers the f64 evaluation and the vertex test slack
        Some(rmax + 1e-6)
    } else {
        None
    }
}
