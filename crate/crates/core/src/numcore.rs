//! Error-tracked scalar and 2×2 matrix arithmetic.
//!
//! Every scalar carries an absolute error radius that is propagated
//! conservatively (outward-rounded) through arithmetic. Group elements are
//! 2×2 complex matrices of unit determinant with a canonical sign, so a
//! matrix and its negative have the same representation. Deduplication is
//! tolerance-based on a quantization grid with neighbor-cell probing, and
//! its soundness is certified after the fact by a pairwise separation
//! audit.

use crate::scalar::Real;
use std::collections::HashMap;
use std::fmt;

/// Errors surfaced by the numeric tower.
#[derive(Debug, thiserror::Error)]
pub enum NumError {
    #[error("precision exhausted: error bound {errbound:e} exceeds budget {budget:e}")]
    PrecisionExhausted { errbound: f64, budget: f64 },
    #[error("separation audit failed: min pairwise distance {separation:e} <= 10*tol = {threshold:e}")]
    SeparationViolation { separation: f64, threshold: f64 },
    #[error("determinant check failed: |det - 1| = {defect:e} exceeds bound {bound:e}")]
    DeterminantDefect { defect: f64, bound: f64 },
    #[error("division by a value not separated from zero (|v| = {value:e}, err = {errbound:e})")]
    DivisionNearZero { value: f64, errbound: f64 },
    #[error("classification indeterminate: {0}")]
    Indeterminate(String),
    #[error("element is not hyperbolic ({0})")]
    NotHyperbolic(String),
}

/// A real number with a tracked absolute error radius.
///
/// The invariant is that the true value lies in `[value - errbound,
/// value + errbound]`. Arithmetic pads bounds outward by a few units of
/// roundoff so the invariant survives the bound computation itself.
#[derive(Debug, Clone, Copy)]
pub struct PrecScalar<T: Real> {
    pub value: T,
    pub errbound: T,
}

#[inline]
fn uround<T: Real>() -> T {
    T::from_f64(T::unit_roundoff()).unwrap()
}

#[inline]
fn pad<T: Real>(x: T) -> T {
    // outward rounding slack: a handful of ulps of the bound itself
    let u = uround::<T>();
    x * (T::one() + u * T::from_f64(8.0).unwrap())
}

impl<T: Real> PrecScalar<T> {
    pub fn exact(value: T) -> Self {
        PrecScalar { value, errbound: T::zero() }
    }

    pub fn new(value: T, errbound: T) -> Self {
        debug_assert!(errbound >= T::zero() && errbound.is_finite());
        PrecScalar { value, errbound }
    }

    /// Value known only to the precision of one rounding of `value`.
    pub fn rounded(value: T) -> Self {
        let e = value.abs() * uround::<T>();
        PrecScalar { value, errbound: pad(e) }
    }

    pub fn neg(self) -> Self {
        PrecScalar { value: -self.value, errbound: self.errbound }
    }

    pub fn add(self, rhs: Self) -> Self {
        let value = self.value + rhs.value;
        let e = self.errbound + rhs.errbound + value.abs() * uround::<T>();
        PrecScalar { value, errbound: pad(e) }
    }

    pub fn sub(self, rhs: Self) -> Self {
        self.add(rhs.neg())
    }

    pub fn mul(self, rhs: Self) -> Self {
        let value = self.value * rhs.value;
        let e = self.value.abs() * rhs.errbound
            + rhs.value.abs() * self.errbound
            + self.errbound * rhs.errbound
            + value.abs() * uround::<T>();
        PrecScalar { value, errbound: pad(e) }
    }

    pub fn div(self, rhs: Self) -> Result<Self, NumError> {
        let b = rhs.value.abs();
        if b <= rhs.errbound + rhs.errbound {
            return Err(NumError::DivisionNearZero {
                value: rhs.value.to_f64(),
                errbound: rhs.errbound.to_f64(),
            });
        }
        let value = self.value / rhs.value;
        let denom = b - rhs.errbound;
        let e = (self.errbound + value.abs() * rhs.errbound) / denom
            + value.abs() * uround::<T>();
        Ok(PrecScalar { value, errbound: pad(e) })
    }

    /// Square root, defined for intervals not extending below zero by more
    /// than the errbound.
    pub fn sqrt(self) -> Self {
        let lo = (self.value - self.errbound).max(T::zero());
        let value = self.value.max(T::zero()).sqrt();
        let slo = lo.sqrt();
        let shi = (self.value + self.errbound).sqrt();
        // bound by the wider half-width of the image interval
        let e = (shi - slo).max(value * uround::<T>());
        PrecScalar { value, errbound: pad(e) }
    }

    pub fn abs(self) -> Self {
        PrecScalar { value: self.value.abs(), errbound: self.errbound }
    }

    /// True if the value is provably positive (interval excludes zero).
    pub fn provably_positive(&self) -> bool {
        self.value > self.errbound
    }

    /// True if the value is provably negative.
    pub fn provably_negative(&self) -> bool {
        self.value < -self.errbound
    }
}

impl<T: Real> fmt::Display for PrecScalar<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:e}", self.value, self.errbound.to_f64())
    }
}

/// Complex number with componentwise error radii.
#[derive(Debug, Clone, Copy)]
pub struct PrecComplex<T: Real> {
    pub re: PrecScalar<T>,
    pub im: PrecScalar<T>,
}

impl<T: Real> PrecComplex<T> {
    pub fn new(re: PrecScalar<T>, im: PrecScalar<T>) -> Self {
        PrecComplex { re, im }
    }

    pub fn exact(re: T, im: T) -> Self {
        PrecComplex { re: PrecScalar::exact(re), im: PrecScalar::exact(im) }
    }

    pub fn zero() -> Self {
        Self::exact(T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::exact(T::one(), T::zero())
    }

    pub fn neg(self) -> Self {
        PrecComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(self) -> Self {
        PrecComplex { re: self.re, im: self.im.neg() }
    }

    pub fn add(self, rhs: Self) -> Self {
        PrecComplex { re: self.re.add(rhs.re), im: self.im.add(rhs.im) }
    }

    pub fn sub(self, rhs: Self) -> Self {
        PrecComplex { re: self.re.sub(rhs.re), im: self.im.sub(rhs.im) }
    }

    pub fn mul(self, rhs: Self) -> Self {
        PrecComplex {
            re: self.re.mul(rhs.re).sub(self.im.mul(rhs.im)),
            im: self.re.mul(rhs.im).add(self.im.mul(rhs.re)),
        }
    }

    pub fn norm_sqr(self) -> PrecScalar<T> {
        self.re.mul(self.re).add(self.im.mul(self.im))
    }

    pub fn modulus(self) -> PrecScalar<T> {
        self.norm_sqr().sqrt()
    }

    pub fn div(self, rhs: Self) -> Result<Self, NumError> {
        let n = rhs.norm_sqr();
        let num = self.mul(rhs.conj());
        Ok(PrecComplex { re: num.re.div(n)?, im: num.im.div(n)? })
    }

    /// Componentwise maximum error bound.
    pub fn errbound(&self) -> T {
        self.re.errbound.max(self.im.errbound)
    }
}

/// Element of the isometry group, stored as a unit-determinant 2×2 complex
/// matrix `[[a, b], [c, d]]` in canonical sign, with the generator word
/// that produced it (letters ±1..±k for generators and their inverses).
#[derive(Debug, Clone)]
pub struct GroupElement<T: Real> {
    pub entries: [PrecComplex<T>; 4],
    pub word: Option<Vec<i32>>,
}

impl<T: Real> GroupElement<T> {
    pub fn identity() -> Self {
        GroupElement {
            entries: [
                PrecComplex::one(),
                PrecComplex::zero(),
                PrecComplex::zero(),
                PrecComplex::one(),
            ],
            word: Some(Vec::new()),
        }
        .canonicalize()
    }

    pub fn from_entries(entries: [PrecComplex<T>; 4], word: Option<Vec<i32>>) -> Self {
        GroupElement { entries, word }.canonicalize()
    }

    pub fn a(&self) -> PrecComplex<T> {
        self.entries[0]
    }
    pub fn b(&self) -> PrecComplex<T> {
        self.entries[1]
    }
    pub fn c(&self) -> PrecComplex<T> {
        self.entries[2]
    }
    pub fn d(&self) -> PrecComplex<T> {
        self.entries[3]
    }

    pub fn det(&self) -> PrecComplex<T> {
        self.entries[0].mul(self.entries[3]).sub(self.entries[1].mul(self.entries[2]))
    }

    pub fn trace(&self) -> PrecComplex<T> {
        self.entries[0].add(self.entries[3])
    }

    /// |tr| with propagated error bound.
    pub fn trace_abs(&self) -> PrecScalar<T> {
        self.trace().modulus()
    }

    /// Verify the unit-determinant invariant.
    pub fn check_unit_det(&self) -> Result<(), NumError> {
        let d = self.det();
        let defect = d.re.value - T::one();
        let defect = (defect * defect + d.im.value * d.im.value).sqrt();
        let bound = pad(d.errbound() * T::from_f64(4.0).unwrap())
            .max(T::from_f64(1e-25).unwrap());
        if defect > bound {
            return Err(NumError::DeterminantDefect {
                defect: defect.to_f64(),
                bound: bound.to_f64(),
            });
        }
        Ok(())
    }

    /// Canonical sign: the first entry (row-major, real part before
    /// imaginary part) whose magnitude provably exceeds its error bound is
    /// made positive. This identifies a matrix with its negative.
    pub fn canonicalize(mut self) -> Self {
        for e in &self.entries {
            if e.re.provably_positive() {
                return self;
            }
            if e.re.provably_negative() {
                self.negate_entries();
                return self;
            }
            if e.im.provably_positive() {
                return self;
            }
            if e.im.provably_negative() {
                self.negate_entries();
                return self;
            }
        }
        // all entries indistinguishable from zero: no unit-det matrix is,
        // so only reachable with absurd error bounds; leave unchanged
        self
    }

    fn negate_entries(&mut self) {
        for e in &mut self.entries {
            *e = e.neg();
        }
    }

    /// Largest componentwise error bound over all entries.
    pub fn errbound(&self) -> T {
        self.entries
            .iter()
            .map(|e| e.errbound())
            .fold(T::zero(), |acc, e| acc.max(e))
    }

    /// The eight real coordinates in row-major (re, im) order.
    pub fn coords(&self) -> [T; 8] {
        [
            self.entries[0].re.value,
            self.entries[0].im.value,
            self.entries[1].re.value,
            self.entries[1].im.value,
            self.entries[2].re.value,
            self.entries[2].im.value,
            self.entries[3].re.value,
            self.entries[3].im.value,
        ]
    }

    /// Entrywise max-distance between canonical representatives.
    pub fn entry_dist(&self, other: &Self) -> T {
        let a = self.coords();
        let b = other.coords();
        let mut m = T::zero();
        for i in 0..8 {
            m = m.max((a[i] - b[i]).abs());
        }
        m
    }
}

/// Matrix product with propagated error bounds and canonical sign.
/// Fails if the result's error bound exceeds `budget` (normally tol/4).
pub fn mat_mul<T: Real>(
    a: &GroupElement<T>,
    b: &GroupElement<T>,
    budget: T,
) -> Result<GroupElement<T>, NumError> {
    let [a11, a12, a21, a22] = a.entries;
    let [b11, b12, b21, b22] = b.entries;
    let entries = [
        a11.mul(b11).add(a12.mul(b21)),
        a11.mul(b12).add(a12.mul(b22)),
        a21.mul(b11).add(a22.mul(b21)),
        a21.mul(b12).add(a22.mul(b22)),
    ];
    let word = match (&a.word, &b.word) {
        (Some(wa), Some(wb)) => {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            Some(w)
        }
        _ => None,
    };
    let g = GroupElement { entries, word }.canonicalize();
    let e = g.errbound();
    if e > budget {
        return Err(NumError::PrecisionExhausted {
            errbound: e.to_f64(),
            budget: budget.to_f64(),
        });
    }
    Ok(g)
}

/// Adjugate inverse of a unit-determinant matrix, canonicalized.
pub fn mat_inv<T: Real>(a: &GroupElement<T>) -> GroupElement<T> {
    let [a11, a12, a21, a22] = a.entries;
    let entries = [a22, a12.neg(), a21.neg(), a11];
    let word = a.word.as_ref().map(|w| w.iter().rev().map(|&l| -l).collect());
    GroupElement { entries, word }.canonicalize()
}

/// Primary quantization cell of an element on a grid of pitch `tol`.
pub type DedupKey = [i64; 8];

fn cell_of<T: Real>(x: T, tol: T) -> (i64, f64) {
    // returns the cell index and the fractional position in [0, 1)
    let q = (x / tol).floor();
    let frac = (x / tol - q).to_f64();
    (q.to_f64() as i64, frac)
}

/// Primary grid key. Collision of keys is necessary but not sufficient for
/// proximity; [`DedupGrid`] adds neighbor-cell probing so that any two
/// elements within entrywise distance tol/2 are matched.
pub fn dedup_key<T: Real>(g: &GroupElement<T>, tol: T) -> Result<DedupKey, NumError> {
    let budget = tol / T::from_f64(4.0).unwrap();
    let e = g.errbound();
    if e >= budget {
        return Err(NumError::PrecisionExhausted {
            errbound: e.to_f64(),
            budget: budget.to_f64(),
        });
    }
    let mut key = [0i64; 8];
    for (i, &x) in g.coords().iter().enumerate() {
        key[i] = cell_of(x, tol).0;
    }
    Ok(key)
}

/// Tolerance-dedup store: a hash grid of pitch `tol` with neighbor-cell
/// probing for coordinates near a cell boundary.
pub struct DedupGrid<T: Real> {
    tol: T,
    cells: HashMap<DedupKey, Vec<usize>>,
    elems: Vec<GroupElement<T>>,
}

impl<T: Real> DedupGrid<T> {
    pub fn new(tol: T) -> Self {
        DedupGrid { tol, cells: HashMap::new(), elems: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement<T>] {
        &self.elems
    }

    pub fn into_elements(self) -> Vec<GroupElement<T>> {
        self.elems
    }

    /// All cells an element within tol/2 of `g` could have as primary key:
    /// for each coordinate whose fractional grid position is within 0.55 of
    /// a boundary, probe the adjacent cell too.
    fn probe_keys(&self, g: &GroupElement<T>) -> Vec<DedupKey> {
        let mut alts: [(i64, Option<i64>); 8] = [(0, None); 8];
        for (i, &x) in g.coords().iter().enumerate() {
            let (q, frac) = cell_of(x, self.tol);
            // a tol/2 shift moves the coordinate by half a cell either way
            // saturating: coordinates far outside the grid range saturate
            // the cell index and must not wrap
            let alt = if frac < 0.55 {
                Some(q.saturating_sub(1))
            } else {
                None
            };
            let alt2 = if frac >= 0.45 { Some(q.saturating_add(1)) } else { None };
            alts[i] = (q, alt.or(alt2));
            if frac < 0.55 && frac >= 0.45 {
                // both neighbors reachable: widen by storing both via the
                // cartesian expansion below using a sentinel
                alts[i] = (q, Some(i64::MIN));
            }
        }
        // cartesian product of {primary, alternates}
        let mut keys: Vec<DedupKey> = vec![[0; 8]];
        for i in 0..8 {
            let (q, alt) = alts[i];
            let options: Vec<i64> = match alt {
                None => vec![q],
                Some(a) if a == i64::MIN => vec![q.saturating_sub(1), q, q.saturating_add(1)],
                Some(a) => vec![q, a],
            };
            let mut next = Vec::with_capacity(keys.len() * options.len());
            for k in &keys {
                for &o in &options {
                    let mut k2 = *k;
                    k2[i] = o;
                    next.push(k2);
                }
            }
            keys = next;
        }
        keys
    }

    /// Insert if no stored element lies within entrywise distance tol/2.
    /// Returns the index of the stored representative and whether the
    /// element was newly inserted.
    pub fn insert(&mut self, g: GroupElement<T>) -> Result<(usize, bool), NumError> {
        let budget = self.tol / T::from_f64(4.0).unwrap();
        let e = g.errbound();
        if e >= budget {
            return Err(NumError::PrecisionExhausted {
                errbound: e.to_f64(),
                budget: budget.to_f64(),
            });
        }
        let half = self.tol / T::from_f64(2.0).unwrap();
        for key in self.probe_keys(&g) {
            if let Some(ids) = self.cells.get(&key) {
                for &id in ids {
                    if self.elems[id].entry_dist(&g) <= half {
                        return Ok((id, false));
                    }
                }
            }
        }
        let id = self.elems.len();
        let key = dedup_key(&g, self.tol)?;
        self.cells.entry(key).or_default().push(id);
        self.elems.push(g);
        Ok((id, true))
    }

    /// Look up without inserting.
    pub fn find(&self, g: &GroupElement<T>) -> Option<usize> {
        let half = self.tol / T::from_f64(2.0).unwrap();
        for key in self.probe_keys(g) {
            if let Some(ids) = self.cells.get(&key) {
                for &id in ids {
                    if self.elems[id].entry_dist(g) <= half {
                        return Some(id);
                    }
                }
            }
        }
        None
    }
}

/// Near-pair separation audit, linear in the number of elements: hashes
/// on a grid of pitch `64 * tol` and measures only pairs falling in the
/// same probe neighborhood. Any pair closer than `32 * tol` is measured,
/// so the `10 * tol` safety check is exact; if no near pair exists the
/// returned minimum is `+inf` (true minimum exceeds `32 * tol`).
pub fn audit_separation_fast<T: Real>(
    elems: &[GroupElement<T>],
    tol: T,
) -> Result<T, NumError> {
    let pitch = tol * T::from_f64(64.0).unwrap();
    let mut grid: DedupGrid<T> = DedupGrid::new(pitch);
    let mut min = T::infinity();
    for g in elems {
        for key in grid.probe_keys(g) {
            if let Some(ids) = grid.cells.get(&key) {
                for &id in ids {
                    let d = grid.elems[id].entry_dist(g);
                    if d < min {
                        min = d;
                    }
                }
            }
        }
        // primary-cell insert without budget or duplicate checks
        let id = grid.elems.len();
        let mut key = [0i64; 8];
        for (i, &x) in g.coords().iter().enumerate() {
            key[i] = cell_of(x, pitch).0;
        }
        grid.cells.entry(key).or_default().push(id);
        grid.elems.push(g.clone());
    }
    let threshold = tol * T::from_f64(10.0).unwrap();
    if min <= threshold {
        return Err(NumError::SeparationViolation {
            separation: min.to_f64(),
            threshold: threshold.to_f64(),
        });
    }
    Ok(min)
}

/// Minimum pairwise entrywise distance among distinct canonical
/// representatives. Errors if the set is not separated by more than
/// `10 * tol`, which would make tolerance dedup unsafe.
pub fn audit_separation<T: Real>(
    elems: &[GroupElement<T>],
    tol: T,
) -> Result<T, NumError> {
    let mut min = T::infinity();
    for i in 0..elems.len() {
        for j in (i + 1)..elems.len() {
            let d = elems[i].entry_dist(&elems[j]);
            if d < min {
                min = d;
            }
        }
    }
    let threshold = tol * T::from_f64(10.0).unwrap();
    if min <= threshold {
        return Err(NumError::SeparationViolation {
            separation: min.to_f64(),
            threshold: threshold.to_f64(),
        });
    }
    Ok(min)
}
