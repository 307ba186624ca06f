//! Monte Carlo Benjamini-Schramm statistics on hyperbolic surfaces:
//! Dirichlet-domain sampling of the quotient, injectivity radius with
//! completeness certificates, the probability `P(InjRad <= R)` with a
//! Wilson interval, and the mean orbit count inside a displacement ball
//! (the compact-set criterion, with `C` specialized to a displacement
//! ball).
//!
//! Covers are handled without re-enumerating the cover group: a point of a
//! degree-`k` cover is a pair (sheet, base point), and an element `g` of
//! the base group acts at sheet `i` only if its monodromy permutation fixes
//! `i`. Statistics over the cover average over sheets.
//!
//! All geometry here runs in `f64` snapshots of the high-precision ball:
//! the statistics are Monte Carlo estimates whose sampling error dwarfs
//! `1e-12`-scale rounding, while hard guarantees (e.g. zero below the
//! systole) are order-of-magnitude safe. Determinism is per-sample: sample
//! `i` draws from its own counter-derived ChaCha stream, so results do not
//! depend on thread count or scheduling.

use crate::fuchsian::{BallEnumeration, CoverSpec, FuchsError, GroupPresentation};
use crate::scalar::Real;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, thiserror::Error)]
pub enum BsError {
    #[error("ball too small: needs {what} >= {needed:.4}, have {have:.4}")]
    IncompleteBall {
        what: &'static str,
        needed: f64,
        have: f64,
    },
    #[error("rejection sampling exceeded {0} proposals for one sample")]
    RejectionBudget(usize),
    #[error(transparent)]
    Fuchs(#[from] FuchsError),
}

/// One group element in `f64`, prepared for fast repeated evaluation.
#[derive(Debug, Clone)]
struct Candidate {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    /// orbit point g * 0 = b/d
    orbit: Complex64,
    /// hyperbolic distance d(0, g * 0)
    orbit_dist: f64,
    /// monodromy permutation under the cover (empty for the base surface)
    perm: Vec<usize>,
}

impl Candidate {
    fn acts_on_sheet(&self, sheet: usize) -> bool {
        self.perm.is_empty() || self.perm[sheet] == sheet
    }

    fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }
}

fn hyp_dist_f64(z: Complex64, w: Complex64) -> f64 {
    let t = 2.0 * (z - w).norm_sqr() / ((1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr()));
    (t + (t * (t + 2.0)).sqrt()).ln_1p()
}

/// Injectivity radius value with its completeness certificate.
#[derive(Debug, Clone, Copy)]
pub struct InjRad {
    pub value: f64,
    /// true iff the enumerated ball provably contains every element that
    /// could displace this little at this point; false means the value is
    /// only a lower bound on the candidates seen
    pub certified: bool,
}

/// Frozen `f64` geometry of one quotient (base surface or cover), derived
/// from a high-precision ball enumeration.
#[derive(Debug, Clone)]
pub struct QuotientGeometry {
    candidates: Vec<Candidate>,
    /// orbit points close enough for their bisectors to cut the domain
    face_orbits: Vec<Complex64>,
    pub domain_radius: f64,
    /// Euclidean radius of the bounding disk for rejection sampling
    pub bounding_radius: f64,
    /// largest translation length the ball is complete for
    pub ell_max: f64,
    pub keep_radius: f64,
    pub degree: usize,
}

impl QuotientGeometry {
    /// Snapshot a ball enumeration. `cover` of `None` (or the trivial
    /// cover) gives the base surface. Requires the ball to reach past
    /// twice the domain circumradius so every face of the Dirichlet domain
    /// is witnessed: a bisector of `g * 0` farther than `2 R0` stays
    /// outside the circumscribed disk entirely.
    pub fn new<T: Real>(
        pres: &GroupPresentation<T>,
        ball: &BallEnumeration<T>,
        cover: Option<&CoverSpec>,
    ) -> Result<Self, BsError> {
        let r0 = ball.domain_radius;
        let needed = 2.0 * r0 + 0.02;
        if ball.keep_radius < needed {
            return Err(BsError::IncompleteBall {
                what: "keep radius",
                needed,
                have: ball.keep_radius,
            });
        }
        let degree = cover.map_or(1, |c| c.degree);
        let mut candidates = Vec::new();
        for g in ball.visited_elements() {
            let word = g.word.as_deref().unwrap_or(&[]);
            if word.is_empty() {
                continue; // identity
            }
            let cf = |p: crate::numcore::PrecComplex<T>| {
                Complex64::new(p.re.value.to_f64(), p.im.value.to_f64())
            };
            let (a, b, c, d) = (cf(g.a()), cf(g.b()), cf(g.c()), cf(g.d()));
            let orbit = b / d;
            let orbit_dist = hyp_dist_f64(Complex64::new(0.0, 0.0), orbit);
            let perm = match cover {
                Some(cv) if cv.degree > 1 => cv.word_permutation(word),
                _ => Vec::new(),
            };
            candidates.push(Candidate { a, b, c, d, orbit, orbit_dist, perm });
        }
        candidates.sort_by(|x, y| x.orbit_dist.total_cmp(&y.orbit_dist));
        let face_orbits = candidates
            .iter()
            .filter(|c| c.orbit_dist <= 2.0 * r0 + 0.02)
            .map(|c| c.orbit)
            .collect();
        let _ = pres;
        Ok(QuotientGeometry {
            candidates,
            face_orbits,
            domain_radius: r0,
            bounding_radius: (r0 / 2.0).tanh(),
            ell_max: 2.0 * (ball.complete_up_to_trace / 2.0).acosh(),
            keep_radius: ball.keep_radius,
            degree,
        })
    }

    /// Dirichlet condition at the origin: `z` is no farther from the
    /// origin than from any other orbit point of it.
    pub fn dirichlet_membership(&self, z: Complex64) -> bool {
        // d(z, 0) <= d(z, w)  <=>  |z|^2 <= |z - w|^2 / (1 - |w|^2)
        let zn = z.norm_sqr();
        self.face_orbits
            .iter()
            .all(|&w| zn * (1.0 - w.norm_sqr()) <= (z - w).norm_sqr())
    }

    /// One hyperbolic-area-uniform point of the Dirichlet domain by
    /// rejection from the bounding disk (radial inverse CDF of the area
    /// element `4 r dr dtheta / (1 - r^2)^2`).
    pub fn sample_point(&self, rng: &mut impl Rng) -> Result<Complex64, BsError> {
        let budget = 100_000;
        let r0sq = self.bounding_radius * self.bounding_radius;
        let scale = r0sq / (1.0 - r0sq);
        for _ in 0..budget {
            let v: f64 = rng.gen();
            let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            let t = v * scale;
            let r = (t / (1.0 + t)).sqrt();
            let z = Complex64::from_polar(r, theta);
            if self.dirichlet_membership(z) {
                return Ok(z);
            }
        }
        Err(BsError::RejectionBudget(budget))
    }

    /// Injectivity radius of the quotient at (sheet, z): half the minimal
    /// displacement over nontrivial elements acting at that sheet.
    pub fn inj_rad(&self, sheet: usize, z: Complex64) -> InjRad {
        let dz = hyp_dist_f64(Complex64::new(0.0, 0.0), z);
        let mut best = f64::INFINITY;
        for c in &self.candidates {
            // displacement at z is at least orbit_dist - 2 d(0, z)
            if c.orbit_dist - 2.0 * dz >= best {
                break; // candidates are sorted by orbit_dist
            }
            if !c.acts_on_sheet(sheet) {
                continue;
            }
            let d = hyp_dist_f64(z, c.apply(z));
            if d < best {
                best = d;
            }
        }
        // certificate: every element displacing <= ell_max at a point of
        // the domain lies inside the keep radius, hence was enumerated
        let certified = best <= self.ell_max && dz <= self.domain_radius + 1e-9;
        InjRad { value: best / 2.0, certified }
    }

    /// Number of nontrivial elements displacing (sheet, z) by at most `c`.
    pub fn orbit_count(&self, sheet: usize, z: Complex64, c: f64) -> usize {
        let dz = hyp_dist_f64(Complex64::new(0.0, 0.0), z);
        let mut count = 0usize;
        for cand in &self.candidates {
            if cand.orbit_dist - 2.0 * dz > c {
                break;
            }
            if cand.acts_on_sheet(sheet) && hyp_dist_f64(z, cand.apply(z)) <= c {
                count += 1;
            }
        }
        count
    }

    fn check_cutoff(&self, c: f64) -> Result<(), BsError> {
        if c > self.ell_max {
            return Err(BsError::IncompleteBall {
                what: "complete translation length",
                needed: c,
                have: self.ell_max,
            });
        }
        Ok(())
    }

    fn per_sample_rng(&self, seed: u64, i: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i + 1);
        rng
    }

    /// Point first, sheet second: the point draw then consumes the same
    /// number of RNG values for every cover degree, so a fixed seed gives
    /// identical base points across degrees and the per-sample statistics
    /// inherit the pointwise monotonicity of nested cover subgroups.
    fn sample_sheet_point(&self, rng: &mut ChaCha8Rng) -> Result<(usize, Complex64), BsError> {
        let z = self.sample_point(rng)?;
        let sheet = if self.degree > 1 { rng.gen_range(0..self.degree) } else { 0 };
        Ok((sheet, z))
    }

    /// Monte Carlo estimate of `P(InjRad <= R)` with the half-width of the
    /// Wilson 95% interval.
    pub fn bs_probability(
        &self,
        r: f64,
        n_samples: usize,
        seed: u64,
    ) -> Result<(f64, f64), BsError> {
        assert!(r > 0.0);
        self.check_cutoff(2.0 * r)?;
        let hits: Result<Vec<bool>, BsError> = (0..n_samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = self.per_sample_rng(seed, i);
                let (sheet, z) = self.sample_sheet_point(&mut rng)?;
                Ok(self.inj_rad(sheet, z).value <= r)
            })
            .collect();
        let k = hits?.iter().filter(|&&h| h).count();
        Ok(wilson(k, n_samples))
    }

    /// Monte Carlo mean of the orbit count in a displacement ball of
    /// radius `c`.
    pub fn orbit_count_statistic(
        &self,
        c: f64,
        n_samples: usize,
        seed: u64,
    ) -> Result<f64, BsError> {
        assert!(c > 0.0);
        self.check_cutoff(c)?;
        let counts: Result<Vec<usize>, BsError> = (0..n_samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = self.per_sample_rng(seed, i);
                let (sheet, z) = self.sample_sheet_point(&mut rng)?;
                Ok(self.orbit_count(sheet, z, c))
            })
            .collect();
        let total: usize = counts?.iter().sum();
        Ok(total as f64 / n_samples as f64)
    }

    /// Acceptance fraction of the rejection sampler times the bounding
    /// disk's hyperbolic area: a Monte Carlo estimate of the domain area.
    pub fn mc_domain_area(&self, n_samples: usize, seed: u64) -> f64 {
        let r0sq = self.bounding_radius * self.bounding_radius;
        let disk_area = 4.0 * std::f64::consts::PI * r0sq / (1.0 - r0sq);
        let accepted: usize = (0..n_samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = self.per_sample_rng(seed, i);
                let v: f64 = rng.gen();
                let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
                let t = v * r0sq / (1.0 - r0sq);
                let r = (t / (1.0 + t)).sqrt();
                usize::from(self.dirichlet_membership(Complex64::from_polar(r, theta)))
            })
            .sum();
        disk_area * accepted as f64 / n_samples as f64
    }
}

/// Wilson 95% interval: returns `(p_hat, half_width)`.
fn wilson(k: usize, n: usize) -> (f64, f64) {
    let z = 1.959963984540054f64;
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    (p, half)
}
